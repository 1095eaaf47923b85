"""
Data behind the four figures, as CSV tables (comma separated, header row,
17 significant digits). Marked parameter values are inserted into the sweeps
so their rows exist exactly.
"""
import logging
from dataclasses import dataclass

import numpy as np

from common.exceptions import UsageError
from exponential.distribution import TruncatedExponential
from gaussian.distribution import TruncatedGaussian
from lemmas.exponential import ExpFrame, exp_g
from lemmas.gaussian import GaussFrame, gauss_f, gauss_parabola, gauss_w_c

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 400
FIGURE_IDS = (1, 2, 3, 4)

GAUSS_SWEEP_ALPHA = -2.0
GAUSS_MARKED_BETAS = (-0.5, 0.0, 0.5, 2.0)
TANGENCY_FRAME = (-1.0, 4.0)
PARABOLA_FACTORS = {"p_valid": 1.1, "p_invalid": 0.9}
EXP_SWEEP_ALPHA = 0.5
EXP_MARKED_BETAS = (2.0, 4.0)
EXP_FRAME = (1.0, 4.0)
EXP_S_LEVELS = ("0.8095", "0.8107", "0.812")


@dataclass(frozen=True)
class FigureRequest:
    figure_id: int
    output_path: str = None
    grid_points: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise UsageError(f"figure must be one of {', '.join(map(str, FIGURE_IDS))}, got {self.figure_id!r}")
        if self.grid_points < 2:
            raise UsageError(f"grid_points must be at least 2, got {self.grid_points}")


@dataclass(frozen=True)
class FigureTable:
    columns: tuple
    data: np.ndarray

    def column(self, name):
        return self.data[:, self.columns.index(name)]

    def row_where(self, name, value):
        index = int(np.argmin(np.abs(self.column(name) - value)))
        return dict(zip(self.columns, self.data[index]))

    def write(self, stream):
        np.savetxt(stream, self.data, fmt="%.17g", delimiter=",", header=",".join(self.columns), comments="")


def _with_marks(start, stop, n, marks):
    return np.union1d(np.linspace(start, stop, n), np.asarray(marks, dtype=float))


def _density_label(prefix, value):
    return f"density_{prefix}_{value:g}"


def _proxy_sweep(make, betas):
    variance, proxy = [], []
    for beta in betas:
        result = make(float(beta)).variance_proxy()
        variance.append(result.variance)
        proxy.append(result.variance_proxy)
    return variance, proxy


def figure_one(n):
    betas = _with_marks(-1.5, 3.0, n, GAUSS_MARKED_BETAS)
    variance, proxy = _proxy_sweep(lambda beta: TruncatedGaussian.standard(GAUSS_SWEEP_ALPHA, beta), betas)
    xs = np.linspace(-2.5, 3.0, len(betas))
    columns = ["beta", "variance", "proxy", "x"]
    data = [betas, variance, proxy, xs]
    for beta in GAUSS_MARKED_BETAS:
        distribution = TruncatedGaussian.standard(GAUSS_SWEEP_ALPHA, beta)
        columns.append(_density_label("beta", beta))
        data.append([distribution.density(float(x)) for x in xs])
    return FigureTable(tuple(columns), np.column_stack(data))


def figure_two(n):
    frame = GaussFrame(*TANGENCY_FRAME)
    w_c = gauss_w_c(frame)
    s_c_squared = 2.0 * w_c + 1.0
    thetas = _with_marks(-2.0, 5.0, n, (0.0, frame.theta0, 2.0 * frame.theta0))
    columns = ["theta", "f", "p_optimal", *PARABOLA_FACTORS]
    levels = [w_c] + [0.5 * (factor * s_c_squared - 1.0) for factor in PARABOLA_FACTORS.values()]
    rows = [
        [theta, gauss_f(frame, theta), *(gauss_parabola(frame, theta, w) for w in levels)]
        for theta in map(float, thetas)
    ]
    return FigureTable(tuple(columns), np.array(rows))


def figure_three(n):
    betas = _with_marks(1.0, 5.0, n, EXP_MARKED_BETAS)
    variance, proxy = _proxy_sweep(lambda beta: TruncatedExponential.standard(EXP_SWEEP_ALPHA, beta), betas)
    ts = np.linspace(0.0, 5.0, len(betas))
    columns = ["beta", "variance", "proxy", "t"]
    data = [betas, variance, proxy, ts]
    for beta in EXP_MARKED_BETAS:
        distribution = TruncatedExponential.standard(EXP_SWEEP_ALPHA, beta)
        columns.append(_density_label("beta", beta))
        data.append([distribution.density(float(t)) for t in ts])
    return FigureTable(tuple(columns), np.column_stack(data))


def figure_four(n):
    alpha, beta = EXP_FRAME
    thetas = _with_marks(-6.0, 6.0, n, (0.0, 2.0))
    frames = [ExpFrame(alpha, beta, float(level)) for level in EXP_S_LEVELS]
    columns = ["theta", *(f"g_at_{level}" for level in EXP_S_LEVELS)]
    rows = [[theta, *(exp_g(frame, theta) for frame in frames)] for theta in map(float, thetas)]
    return FigureTable(tuple(columns), np.array(rows))


BUILDERS = {1: figure_one, 2: figure_two, 3: figure_three, 4: figure_four}


def build_figure(request):
    table = BUILDERS[request.figure_id](request.grid_points)
    if not np.all(np.isfinite(table.data)):
        logger.warning("figure %d contains non-finite values", request.figure_id)
    return table


def write_figure(request, stream):
    table = build_figure(request)
    table.write(stream)
    logger.info("figure %d: %d rows x %d columns", request.figure_id, *table.data.shape)
    return table
