"""
MGF-domination oracle: checks ln E[e^{θ(X − EX)}] ≤ s²θ²/2 on a refined θ-grid
and bisects on s² for the smallest value that passes.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from common.exceptions import BracketError, DomainError, EvaluationError

logger = logging.getLogger(__name__)

CERTIFICATION_SLACK = 1e-9
# Coarse maxima within this distance of the best one are all refined.
CANDIDATE_BAND = 1e-6
ZOOM_POINTS = 21
MIN_GRID_POINTS = 101


@dataclass(frozen=True)
class GridSpec:
    theta_max: float
    n_points: int = 4001
    refinement_rounds: int = 2
    theta_min: float = None

    def __post_init__(self):
        if not (self.theta_max > 0.0 and math.isfinite(self.theta_max)):
            raise DomainError(f"theta_max must be positive and finite, got {self.theta_max}")
        if self.n_points < MIN_GRID_POINTS:
            raise DomainError(f"grid needs at least {MIN_GRID_POINTS} points, got {self.n_points}")
        if self.refinement_rounds < 0:
            raise DomainError(f"refinement_rounds must be nonnegative, got {self.refinement_rounds}")
        if self.theta_min is not None and not self.theta_min < self.theta_max:
            raise DomainError(f"theta_min {self.theta_min} must lie below theta_max {self.theta_max}")

    @property
    def lower(self):
        return -self.theta_max if self.theta_min is None else self.theta_min

    @property
    def spacing(self):
        return (self.theta_max - self.lower) / (self.n_points - 1)

    def nodes(self):
        return np.linspace(self.lower, self.theta_max, self.n_points)

    @classmethod
    def for_window(cls, window, n_points=4001, refinement_rounds=2):
        lower, upper = window
        return cls(theta_max=upper, n_points=n_points, refinement_rounds=refinement_rounds, theta_min=lower)


@dataclass(frozen=True)
class ProxyCheck:
    holds: bool
    theta_star: float
    max_residual: float
    evaluations: int


@dataclass(frozen=True)
class ProxyCertificate:
    s_squared: float
    theta_star: float
    max_residual: float
    bracket: tuple
    evaluations: int
    grid: GridSpec

    def as_dict(self):
        return {
            "s_squared": self.s_squared,
            "theta_star": self.theta_star,
            "max_residual": self.max_residual,
            "bracket": list(self.bracket),
            "evaluations": self.evaluations,
            "grid": {
                "theta_min": self.grid.lower,
                "theta_max": self.grid.theta_max,
                "n_points": self.grid.n_points,
                "refinement_rounds": self.grid.refinement_rounds,
            },
        }


class _ResidualCheck:
    """Evaluates log_cmgf on the coarse grid once and counts every evaluation."""

    def __init__(self, log_cmgf, grid):
        self.log_cmgf = log_cmgf
        self.grid = grid
        self.evaluations = 0
        self.nodes = grid.nodes()
        self.values = np.array([self(theta) for theta in self.nodes])

    def __call__(self, theta):
        self.evaluations += 1
        value = self.log_cmgf(float(theta))
        if not math.isfinite(value):
            raise EvaluationError(f"log-MGF is not finite at theta={theta!r}", theta=float(theta))
        return value

    def check(self, s_squared):
        if s_squared < 0.0:
            raise DomainError(f"s_squared must be nonnegative, got {s_squared}")
        residual = self.values - 0.5 * s_squared * self.nodes ** 2
        best = float(residual.max())
        theta_star = float(self.nodes[int(residual.argmax())])
        candidates = [
            i for i in range(len(residual))
            if residual[i] >= best - CANDIDATE_BAND
            and (i == 0 or residual[i] >= residual[i - 1])
            and (i == len(residual) - 1 or residual[i] >= residual[i + 1])
        ]
        for i in candidates:
            theta, value = self._zoom(float(self.nodes[i]), s_squared)
            if value > best:
                best, theta_star = value, theta
        return ProxyCheck(best <= CERTIFICATION_SLACK, theta_star, best, self.evaluations)

    def _zoom(self, centre, s_squared):
        half = self.grid.spacing
        best_theta = centre
        best = self(centre) - 0.5 * s_squared * centre * centre
        for _ in range(self.grid.refinement_rounds):
            # zoom points stay inside the grid window
            zoom = np.clip(np.linspace(best_theta - half, best_theta + half, ZOOM_POINTS), self.grid.lower,
                           self.grid.theta_max)
            for theta in np.unique(zoom):
                theta = float(theta)
                value = self(theta) - 0.5 * s_squared * theta * theta
                if value > best:
                    best, best_theta = value, theta
            half /= 10.0
        return best_theta, best


def check_proxy(log_cmgf, s_squared, grid):
    """Does exp(s²θ²/2) dominate the centered MGF on the refined grid (slack 1e-9)?"""
    return _ResidualCheck(log_cmgf, grid).check(s_squared)


def certify_optimal_proxy(log_cmgf, lo, hi, tol, grid, checker=None):
    """Bisect on s² between a failing `lo` and a passing `hi` until hi − lo ≤ tol."""
    if not lo < hi:
        raise BracketError(f"bisection needs lo < hi, got ({lo!r}, {hi!r})")
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    checker = checker or _ResidualCheck(log_cmgf, grid)
    failing = checker.check(lo)
    if failing.holds:
        raise BracketError(f"the domination check already holds at lo={lo!r}")
    passing = checker.check(hi)
    if not passing.holds:
        raise BracketError(
            f"the domination check fails at hi={hi!r} (residual {passing.max_residual:.3g} at theta={passing.theta_star:.6g})"
        )
    steps = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        result = checker.check(mid)
        if result.holds:
            hi, passing = mid, result
        else:
            lo, failing = mid, result
        steps += 1
        logger.debug("bisection step %d: bracket (%.12g, %.12g)", steps, lo, hi)
    logger.info("certified s^2 = %.12g after %d steps, %d evaluations", hi, steps, checker.evaluations)
    return ProxyCertificate(
        s_squared=hi,
        theta_star=failing.theta_star,
        max_residual=passing.max_residual,
        bracket=(lo, hi),
        evaluations=checker.evaluations,
        grid=grid,
    )


def default_grid(distribution, n_points=4001, refinement_rounds=2, theta_max=None):
    if theta_max is not None:
        return GridSpec(theta_max=theta_max, n_points=n_points, refinement_rounds=refinement_rounds)
    return GridSpec.for_window(distribution.theta_window(), n_points, refinement_rounds)


def certify_distribution(distribution, tol=1e-6, grid=None):
    """Certify the optimal proxy of `distribution`, seeding bisection with its variance."""
    grid = grid or default_grid(distribution)
    checker = _ResidualCheck(distribution.log_centered_mgf, grid)
    variance = distribution.variance()
    at_variance = checker.check(variance)
    if at_variance.holds:
        logger.info("variance %.12g already dominates: strictly sub-Gaussian on this grid", variance)
        return ProxyCertificate(
            s_squared=variance,
            theta_star=at_variance.theta_star,
            max_residual=at_variance.max_residual,
            bracket=(variance, variance),
            evaluations=checker.evaluations,
            grid=grid,
        )
    ceiling = distribution.proxy_ceiling() + CERTIFICATION_SLACK
    return certify_optimal_proxy(distribution.log_centered_mgf, variance, ceiling, tol, grid, checker=checker)
