"""
Grid batteries that turn the proof lemmas into pass/fail checks.

Sign checks record value/scale with scale the sum of magnitudes of the terms
that produced the value, and pass when every margin is at least
RELATIVE_MARGIN. Identity checks record 1 − |error|/tolerance and pass when
every margin is nonnegative.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from common.exceptions import SubGaussianError, UsageError
from common.special_functions import gauss_F_derivatives
from exponential.distribution import standard_proxy, standard_variance

from .appendix import POSITIVITY_FUNCTIONS, positivity_function
from .exponential import ExpFrame, exp_bounds, exp_discriminant, exp_G, exp_g, exp_g3_at_zero
from .gaussian import (
    GaussFrame,
    gauss_f,
    gauss_h,
    gauss_h_prime,
    gauss_h_second_terms,
    gauss_parabola,
    gauss_parabola_slope,
    gauss_S_terms,
    gauss_w_c,
    gauss_Z_terms,
)

logger = logging.getLogger(__name__)

RELATIVE_MARGIN = 1e-12
DEFAULT_GRID = 200
SUITES = ("gaussian", "exponential", "appendix")

SYMMETRY_SEED = 7
SYMMETRY_CASES = 50


@dataclass(frozen=True)
class LemmaOutcome:
    name: str
    passed: bool
    worst_margin: float
    points: int
    detail: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "worst_margin": self.worst_margin if math.isfinite(self.worst_margin) else None,
            "points": self.points,
            "detail": self.detail,
        }


@dataclass
class _Tally:
    name: str
    threshold: float
    points: int = 0
    worst: float = math.inf
    where: str = ""

    def record(self, margin, where):
        self.points += 1
        if math.isnan(margin):
            margin = -math.inf
        if margin < self.worst:
            self.worst, self.where = margin, where

    def sign(self, value, scale, where, expected=1.0):
        if not scale > 0.0:
            self.record(-math.inf, where)
            return
        self.record(expected * value / scale, where)

    def close(self, actual, expected, tol, where):
        self.record(1.0 - abs(actual - expected) / tol, where)

    def outcome(self):
        passed = self.points > 0 and self.worst >= self.threshold
        return LemmaOutcome(self.name, passed, self.worst, self.points, f"worst at {self.where}")


def _sign_tally(name):
    return _Tally(name, RELATIVE_MARGIN)


def _identity_tally(name):
    return _Tally(name, 0.0)


def _guarded(check):
    """Run a battery; numerical or domain failures become a failed outcome."""
    def run(grid):
        try:
            return check(grid)
        except SubGaussianError as exc:
            logger.warning("lemma battery %s aborted: %s", check.__name__, exc)
            name = check.__name__.removeprefix("_check_").replace("_", " ")
            return LemmaOutcome(name, False, -math.inf, 0, str(exc))

    run.__name__ = check.__name__
    return run


def _magnitude(terms):
    return math.fsum(abs(term) for term in terms)


# Gaussian


@_guarded
def _check_symmetry(grid):
    tally = _identity_tally("symmetry of p, f and h")
    rng = np.random.default_rng(SYMMETRY_SEED)
    tol = 1e-11
    for _ in range(SYMMETRY_CASES):
        alpha = float(rng.uniform(-4.0, 2.0))
        frame = GaussFrame(alpha, alpha + float(rng.uniform(0.2, 6.0)))
        t = float(rng.uniform(0.05, 3.0))
        w = float(rng.uniform(0.2, 2.0)) * (1.0 if rng.random() < 0.5 else -1.0)
        where = f"(alpha, beta, t, w) = ({frame.alpha:.6g}, {frame.beta:.6g}, {t:.6g}, {w:.6g})"

        vertex = -frame.c / (2.0 * w)
        right, left = gauss_parabola(frame, vertex + t, w), gauss_parabola(frame, vertex - t, w)
        tally.close(right, left, tol * (1.0 + abs(left)), where)

        theta0 = frame.theta0
        right, left = gauss_f(frame, theta0 + t), gauss_f(frame, theta0 - t)
        tally.close(right, left, tol * (1.0 + abs(left)), where)

        right, left = gauss_h(frame, theta0 + t), gauss_h(frame, theta0 - t)
        tally.close(right, -left, tol * (1.0 + abs(left)), where)
    return tally.outcome()


@_guarded
def _check_concavity(grid):
    tally = _sign_tally("strict concavity of h right of theta0")
    offsets = np.logspace(-3.0, math.log10(20.0), grid)
    for width in (0.5, 2.0, 4.0, 10.0):
        for shift in (-1.5, 0.0, 2.0):
            frame = GaussFrame(shift - 0.5 * width, shift + 0.5 * width)
            for t in offsets:
                t = float(t)
                where = f"(alpha, beta, theta0 ± t) = ({frame.alpha:g}, {frame.beta:g}, {frame.theta0:g} ± {t:.6g})"
                terms = gauss_h_second_terms(frame, frame.theta0 + t)
                tally.sign(math.fsum(terms), _magnitude(terms), where, expected=-1.0)
                terms = gauss_h_second_terms(frame, frame.theta0 - t)
                tally.sign(math.fsum(terms), _magnitude(terms), where, expected=1.0)
    return tally.outcome()


@_guarded
def _check_tangency(grid):
    tally = _identity_tally("tangency of f and the optimal parabola")
    tol = 1e-10
    for alpha, beta in ((-1.0, 4.0), (-2.0, 0.5), (0.5, 3.0), (-3.0, 1.0)):
        frame = GaussFrame(alpha, beta)
        theta0, c, w = frame.theta0, frame.c, gauss_w_c(frame)
        where = f"(alpha, beta) = ({alpha:g}, {beta:g})"
        tally.close(gauss_f(frame, 0.0), gauss_parabola(frame, 0.0, w), tol, where)
        tally.close(gauss_f(frame, 2.0 * theta0), 0.0, tol, where)
        tally.close(gauss_parabola(frame, 2.0 * theta0, w), 0.0, tol, where)
        tally.close(gauss_h(frame, theta0), gauss_parabola_slope(frame, theta0, w), tol, where)
        tally.close(gauss_h(frame, 2.0 * theta0), -c, tol, where)
        tally.close(gauss_parabola_slope(frame, 2.0 * theta0, w), -c, tol, where)
        tally.close(gauss_h(frame, 0.0), gauss_parabola_slope(frame, 0.0, w), tol, where)
    return tally.outcome()


@_guarded
def _check_symmetric_curvature(grid):
    tally = _identity_tally("second-order contact in the symmetric case")
    tol = 1e-12
    for beta in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        frame = GaussFrame(-beta, beta)
        w = gauss_w_c(frame)
        where = f"beta = {beta:g}"
        tally.close(frame.c, 0.0, 1e-14, where)
        tally.close(gauss_h(frame, 0.0), gauss_parabola_slope(frame, 0.0, w), tol, where)
        tally.close(gauss_h_prime(frame, 0.0), 2.0 * w, tol, where)
    return tally.outcome()


@_guarded
def _check_z_sign(grid):
    tally = _sign_tally("Z_beta negative for theta > 0")
    thetas = np.logspace(-2.0, math.log10(8.0), grid)
    for beta in (0.5, 1.0, 2.0, 4.0):
        for theta in thetas:
            terms = gauss_Z_terms(beta, float(theta))
            tally.sign(math.fsum(terms), _magnitude(terms), f"(beta, theta) = ({beta:g}, {theta:.6g})", -1.0)
    return tally.outcome()


@_guarded
def _check_s_sign(grid):
    tally = _sign_tally("S_beta positive for theta > 0")
    thetas = np.logspace(-1.0, 1.0, grid)
    for beta in (0.5, math.sqrt(3.0), 2.0, 5.0):
        for theta in thetas:
            terms = gauss_S_terms(beta, float(theta))
            tally.sign(math.fsum(terms), _magnitude(terms), f"(beta, theta) = ({beta:g}, {theta:.6g})")
    return tally.outcome()


@_guarded
def _check_third_derivative_identity(grid):
    tally = _identity_tally("third derivative of F from P2")
    thetas = np.linspace(-6.0, 6.0, grid)
    for beta in (0.3, 1.0, 1.7, 3.0):
        for theta in thetas:
            theta = float(theta)
            _, d1, d2, d3 = gauss_F_derivatives(beta, theta)
            p2 = theta * theta + 1.0 - beta * beta
            terms = (d3, 2.0 * theta * d2, p2 * d1)
            scale = _magnitude(terms)
            if scale == 0.0:
                continue
            tally.close(math.fsum(terms) / scale, 0.0, 1e-12, f"(beta, theta) = ({beta:g}, {theta:.6g})")
    return tally.outcome()


GAUSSIAN_BATTERY = (
    _check_symmetry,
    _check_concavity,
    _check_tangency,
    _check_symmetric_curvature,
    _check_z_sign,
    _check_s_sign,
    _check_third_derivative_identity,
)


# Exponential

BRACKET_ALPHAS = np.linspace(0.0, 5.0, 6)
BRACKET_WIDTHS = np.geomspace(0.1, 12.0, 6)
MAXIMA_FRAMES = tuple((alpha, eps) for alpha in (0.0, 1.0, 3.0) for eps in (0.5, 3.0, 8.0))
# θ range for the G and g scans; wide enough to contain θ = 2 and the flat tails.
SCAN_THETA = (-8.0, 8.0)


def _bracket_frames():
    for alpha in BRACKET_ALPHAS:
        for eps in BRACKET_WIDTHS:
            yield ExpFrame(float(alpha), float(alpha + eps), 1.0)


@_guarded
def _check_bracketing(grid):
    tally = _sign_tally("s_inf < s_c <= s_1")
    for frame in _bracket_frames():
        bounds = exp_bounds(frame)
        s_c = math.sqrt(standard_proxy(frame.epsilon))
        where = f"(alpha, beta) = ({frame.alpha:g}, {frame.beta:.6g})"
        tally.sign(s_c - bounds.s_inf, s_c, where)
        tally.sign(bounds.s_1 - s_c, bounds.s_1, where)
        tally.sign(bounds.s_2 - bounds.s_1, bounds.s_2, where)
    return tally.outcome()


@_guarded
def _check_variance_identity(grid):
    tally = _identity_tally("s_inf squared equals the variance")
    for frame in _bracket_frames():
        eps = frame.epsilon
        # ε²e^{α+β}/(e^β − e^α)² with e^{2α} cancelled
        literal = 1.0 - eps * eps * math.exp(eps) / math.expm1(eps) ** 2
        variance = standard_variance(eps)
        tally.close(literal, variance, 1e-13 * variance + 1e-15, f"(alpha, beta) = ({frame.alpha:g}, {frame.beta:.6g})")
    return tally.outcome()


@_guarded
def _check_discriminant_root(grid):
    tally = _identity_tally("discriminant vanishes at s_1")
    for frame in _bracket_frames():
        at_root = frame.with_s(exp_bounds(frame).s_1)
        a, b, c = at_root.coefficients
        scale = b * b + 4.0 * abs(a * c)
        tally.close(exp_discriminant(at_root) / scale, 0.0, 1e-8, f"(alpha, beta) = ({frame.alpha:g}, {frame.beta:.6g})")
    return tally.outcome()


@_guarded
def _check_two_maxima(grid):
    tally = _sign_tally("G has its second maximum at theta = 2")
    thetas = [float(t) for t in np.linspace(*SCAN_THETA, grid) if abs(t) >= 0.05]
    near_two = np.linspace(1.5, 2.5, max(grid // 4, 11))
    for alpha, eps in MAXIMA_FRAMES:
        proxy = standard_proxy(eps)
        above = ExpFrame(alpha, alpha + eps, math.sqrt(1.001 * proxy))
        below = above.with_s(math.sqrt(0.999 * proxy))
        spread = math.exp(alpha + eps) - math.exp(alpha)
        where = f"(alpha, beta) = ({alpha:g}, {alpha + eps:g})"
        for theta in thetas:
            tally.sign(exp_G(above, theta), spread, f"{where}, theta = {theta:.6g}", expected=-1.0)
        peak = max(exp_G(below, float(theta)) for theta in near_two)
        tally.sign(peak, spread, f"{where}, below the proxy")
    return tally.outcome()


@_guarded
def _check_g_matches_G(grid):
    tally = _identity_tally("g and G agree in sign")
    thetas = np.linspace(*SCAN_THETA, grid)
    for alpha, eps in MAXIMA_FRAMES:
        proxy = standard_proxy(eps)
        for factor in (0.999, 1.0, 1.001):
            frame = ExpFrame(alpha, alpha + eps, math.sqrt(factor * proxy))
            spread = math.exp(frame.beta) - math.exp(frame.alpha)
            for theta in thetas:
                theta = float(theta)
                parabola = math.exp(0.5 * frame.s ** 2 * theta * theta)
                rescaled = parabola * exp_G(frame, theta) / spread
                g = exp_g(frame, theta)
                tally.close(rescaled, g, 1e-9 * parabola, f"(alpha, beta, s^2 factor, theta) = ({alpha:g}, {frame.beta:g}, {factor:g}, {theta:.6g})")
                if abs(g) > 1e-9 * parabola and math.copysign(1.0, g) != math.copysign(1.0, rescaled):
                    tally.record(-math.inf, f"sign flip at theta = {theta:.6g}")
    return tally.outcome()


@_guarded
def _check_g3_positive(grid):
    tally = _sign_tally("g''' at zero positive")
    kernel = positivity_function("P")
    for eps in np.geomspace(0.1, 50.0, grid):
        eps = float(eps)
        value = exp_g3_at_zero(1.0, eps)
        cube = (-math.expm1(-eps)) ** 3
        tally.sign(value, kernel.magnitude_scaled(eps) / cube, f"epsilon = {eps:.6g}")
    return tally.outcome()


@_guarded
def _check_exponential_tangency(grid):
    tally = _identity_tally("tangency at theta = 2")
    step = 1e-4
    for alpha, eps in MAXIMA_FRAMES:
        frame = ExpFrame(alpha, alpha + eps, 1.0)
        distribution = frame.distribution
        proxy = standard_proxy(eps)
        where = f"(alpha, beta) = ({alpha:g}, {frame.beta:g})"
        tally.close(distribution.log_centered_mgf(2.0), 2.0 * proxy, 1e-9 * max(1.0, proxy), where)
        slope = (
            distribution.log_centered_mgf(2.0 + step) - distribution.log_centered_mgf(2.0 - step)
        ) / (2.0 * step)
        tally.close(slope, 2.0 * proxy, 1e-6 * max(1.0, proxy), where)
    return tally.outcome()


EXPONENTIAL_BATTERY = (
    _check_bracketing,
    _check_variance_identity,
    _check_discriminant_root,
    _check_two_maxima,
    _check_g_matches_G,
    _check_g3_positive,
    _check_exponential_tangency,
)


# Appendix


def _appendix_check(name):
    function = POSITIVITY_FUNCTIONS[name]

    def check(grid):
        tally = _sign_tally(f"{name} positive")
        xs = [float(x) for x in np.logspace(-1.0, math.log10(20.0), grid)] + [40.0, 100.0, 300.0]
        for x in xs:
            tally.sign(function.scaled(x), function.magnitude_scaled(x), f"x = {x:.6g}")
        return tally.outcome()

    check.__name__ = f"_check_{name}_positive"
    return _guarded(check)


APPENDIX_BATTERY = tuple(_appendix_check(name) for name in POSITIVITY_FUNCTIONS)

BATTERIES = {
    "gaussian": GAUSSIAN_BATTERY,
    "exponential": EXPONENTIAL_BATTERY,
    "appendix": APPENDIX_BATTERY,
}


def suite_names(suite):
    if suite == "all":
        return SUITES
    if suite not in BATTERIES:
        raise UsageError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES + ('all',))}")
    return (suite,)


def run_suite(suite, grid=DEFAULT_GRID):
    """Run one battery (or "all") on grids of `grid` points; returns [(suite, LemmaOutcome)]."""
    if int(grid) < 5:
        raise UsageError(f"grid must be at least 5 points, got {grid}")
    results = []
    for name in suite_names(suite):
        for check in BATTERIES[name]:
            outcome = check(int(grid))
            logger.info(
                "%s / %s: %s (worst margin %.3g over %d points)",
                name, outcome.name, "pass" if outcome.passed else "FAIL", outcome.worst_margin, outcome.points,
            )
            results.append((name, outcome))
    return results
