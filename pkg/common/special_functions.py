"""
Standard-normal density, CDF, CDF differences and quantile, the F-family of
the symmetric truncation window, and the expm1 helpers shared by the
exponential formulas.

Endpoints are ExtendedReal values (or plain floats, which are coerced); all
functions are pure.
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import special

from .exceptions import DomainError, UsageError

SQRT2 = math.sqrt(2.0)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Beyond this magnitude Φ differences are taken from the scaled tail erfcx form.
TAIL_SWITCH = 8.0

# |βθ| below this uses the sinh/cosh form of the F-derivatives.
_HYPERBOLIC_SWITCH = 20.0

# Truncated-normal moments: the window is cut where the density has fallen by
# e^{-MOMENT_DEPTH} from its peak, then integrated with MOMENT_NODES Gauss-Legendre nodes.
MOMENT_DEPTH = 40.0
MOMENT_NODES = 96


@dataclass(frozen=True, order=True)
class ExtendedReal:
    """A real number or one of ±∞. NaN is rejected."""

    value: float

    def __post_init__(self):
        try:
            value = float(self.value)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"not a real number: {self.value!r}") from exc
        if math.isnan(value):
            raise DomainError("NaN is not an extended real")
        object.__setattr__(self, "value", value)

    @classmethod
    def parse(cls, text):
        """Parse '1.5', '-inf', '+inf', 'inf' (case-insensitive)."""
        if isinstance(text, ExtendedReal):
            return text
        if isinstance(text, (int, float)) and not isinstance(text, bool):
            return cls(text)
        raw = str(text).strip().lower().replace("−", "-").replace("∞", "inf")
        try:
            value = float(raw)
        except ValueError as exc:
            raise UsageError(f"cannot parse {text!r} as a number or ±inf") from exc
        return cls(value)

    @property
    def is_finite(self):
        return math.isfinite(self.value)

    @property
    def is_neg_inf(self):
        return self.value == -math.inf

    @property
    def is_pos_inf(self):
        return self.value == math.inf

    def to_json(self):
        """JSON has no infinity literal; infinite endpoints are written as strings."""
        if self.is_neg_inf:
            return "-inf"
        if self.is_pos_inf:
            return "+inf"
        return self.value

    def __float__(self):
        return self.value

    def __str__(self):
        return str(self.to_json())


NEG_INF = ExtendedReal(-math.inf)
POS_INF = ExtendedReal(math.inf)


def as_extended(value):
    return value if isinstance(value, ExtendedReal) else ExtendedReal.parse(value)


def _real(x):
    value = float(x)
    if math.isnan(value):
        raise DomainError("NaN argument")
    return value


def std_normal_pdf(x):
    x = _real(x)
    if math.isinf(x):
        return 0.0
    return INV_SQRT_2PI * math.exp(-0.5 * x * x)


def std_normal_log_pdf(x):
    x = _real(x)
    if math.isinf(x):
        return -math.inf
    return -0.5 * x * x - LOG_SQRT_2PI


def std_normal_cdf(x):
    x = _real(x)
    return float(0.5 * special.erfc(-x / SQRT2))


def std_normal_sf(x):
    """1 − Φ(x) without cancellation."""
    x = _real(x)
    return float(0.5 * special.erfc(x / SQRT2))


def _ordered(lo, hi):
    lo, hi = _real(lo), _real(hi)
    if not lo < hi:
        raise DomainError(f"empty interval: lower {lo} must be below upper {hi}")
    return lo, hi


def _scaled_tail_gap(x, y):
    """e^{x²/2}·(Q(x) − Q(y)) for TAIL_SWITCH < x < y ≤ ∞, with Q = 1 − Φ."""
    far = 0.0
    if math.isfinite(y):
        far = float(special.erfcx(y / SQRT2)) * math.exp(-0.5 * (y - x) * (y + x))
    return 0.5 * (float(special.erfcx(x / SQRT2)) - far)


def _upper_tail_gap(x, y):
    """Q(x) − Q(y) for 0 ≤ x < y ≤ ∞."""
    if x > TAIL_SWITCH:
        return math.exp(-0.5 * x * x) * _scaled_tail_gap(x, y)
    return float(0.5 * (special.erfc(x / SQRT2) - special.erfc(y / SQRT2)))


def std_normal_cdf_diff(lo, hi):
    """Φ(hi) − Φ(lo) for lo < hi, evaluated on the side of zero that avoids cancellation."""
    lo, hi = _ordered(lo, hi)
    if lo >= 0.0:
        return _upper_tail_gap(lo, hi)
    if hi <= 0.0:
        return _upper_tail_gap(-hi, -lo)
    return float(0.5 * (special.erf(hi / SQRT2) - special.erf(lo / SQRT2)))


def log_std_normal_cdf_diff(lo, hi):
    """ln(Φ(hi) − Φ(lo)); finite even where the difference underflows."""
    lo, hi = _ordered(lo, hi)
    if lo >= 0.0:
        x, y = lo, hi
    elif hi <= 0.0:
        x, y = -hi, -lo
    else:
        return math.log(std_normal_cdf_diff(lo, hi))
    if x > TAIL_SWITCH:
        return -0.5 * x * x + math.log(_scaled_tail_gap(x, y))
    return math.log(_upper_tail_gap(x, y))


def std_normal_quantile(p):
    p = _real(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {p}")
    return float(special.ndtri(p))


def _pdf_over_mass(x, log_mass):
    if math.isinf(x):
        return 0.0
    return math.exp(std_normal_log_pdf(x) - log_mass)


def truncated_normal_mean(lo, hi, log_mass=None):
    """(φ(lo) − φ(hi)) / (Φ(hi) − Φ(lo)), the mean of N(0, 1) restricted to (lo, hi)."""
    lo, hi = _real(lo), _real(hi)
    if log_mass is None:
        log_mass = log_std_normal_cdf_diff(lo, hi)
    if math.isfinite(lo) and math.isfinite(hi):
        exponent = 0.5 * (hi - lo) * (hi + lo)
        if abs(exponent) < 1.0:
            # φ(lo) = φ(hi)·e^{exponent}; expm1 keeps the near-symmetric case exact
            return math.expm1(exponent) * _pdf_over_mass(hi, log_mass)
    return _pdf_over_mass(lo, log_mass) - _pdf_over_mass(hi, log_mass)


@lru_cache(maxsize=None)
def _legendre_half(n):
    """Positive Gauss-Legendre nodes on (0, 1] and their weights; n is even."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return nodes[n // 2:], weights[n // 2:]


def _effective_window(lo, hi):
    """(lo, hi) with 0 ≤ lo or lo < 0 < hi, cut where e^{-x²/2} drops MOMENT_DEPTH below its peak."""
    peak = max(lo, 0.0)
    reach = math.sqrt(peak * peak + 2.0 * MOMENT_DEPTH)
    return max(lo, -reach), min(hi, reach)


def _window_moments(lo, hi):
    """(centre, E[X] − centre, Var X) for N(0, 1) on (lo, hi), centre being the middle of the cut window.

    Nodes are paired ±u about the centre and each pair is summed with its
    cosh/sinh factors, so nothing is subtracted from the centre.
    """
    if hi <= 0.0:
        centre, offset, variance = _window_moments(-hi, -lo)
        return -centre, -offset, variance
    lo, hi = _effective_window(lo, hi)
    centre, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    nodes, weights = _legendre_half(MOMENT_NODES)
    u = half * nodes
    tilt = abs(centre) * u
    log_near = np.log(weights) - 0.5 * u * u + tilt
    # near: the node of each pair on the side of zero; far: its mirror image
    near = np.exp(log_near - log_near.max())
    far = near * np.exp(-2.0 * tilt)
    mass = float(np.sum(near + far))
    toward = -1.0 if centre > 0.0 else 1.0
    offset = toward * float(np.sum(u * near * -np.expm1(-2.0 * tilt))) / mass
    points = np.concatenate((toward * u, -toward * u))
    probabilities = np.concatenate((near, far)) / mass
    variance = float(np.sum(probabilities * (points - offset) ** 2))
    return centre, offset, variance


def truncated_normal_moments(lo, hi):
    """(mean, variance) of N(0, 1) restricted to (lo, hi), by centred quadrature."""
    lo, hi = _ordered(lo, hi)
    centre, offset, variance = _window_moments(lo, hi)
    return centre + offset, variance


def truncated_normal_centre_offset(lo, hi):
    """E[X] − (lo + hi)/2 for N(0, 1) restricted to a bounded (lo, hi)."""
    lo, hi = _ordered(lo, hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"window ({lo}, {hi}) has no centre")
    centre, offset, _ = _window_moments(lo, hi)
    return (centre - 0.5 * (lo + hi)) + offset


class FDerivatives(NamedTuple):
    F: float
    d1: float
    d2: float
    d3: float


def _f_family(beta, theta, log_norm):
    """F′, F″, F‴ of the window (−β, β) at θ, each divided by e^{log_norm}."""
    s = beta * theta
    if abs(s) < _HYPERBOLIC_SWITCH:
        weight = math.exp(-0.5 * (theta * theta + beta * beta) - LOG_SQRT_2PI - log_norm)
        sh, ch = math.sinh(s), math.cosh(s)
        d1 = -2.0 * weight * sh
        d2 = 2.0 * weight * (theta * sh - beta * ch)
        d3 = 2.0 * weight * (2.0 * s * ch - (beta * beta + theta * theta - 1.0) * sh)
        return d1, d2, d3
    plus = _pdf_over_mass(theta + beta, log_norm)
    minus = _pdf_over_mass(theta - beta, log_norm)
    d1 = plus - minus
    d2 = -(beta + theta) * plus + (theta - beta) * minus
    d3 = plus * ((beta + theta) ** 2 - 1.0) + minus * (1.0 - (beta - theta) ** 2)
    return d1, d2, d3


def _check_window(beta, theta):
    beta, theta = _real(beta), _real(theta)
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"half-width beta must be positive and finite, got {beta}")
    if not math.isfinite(theta):
        raise DomainError("theta must be finite")
    return beta, theta


def gauss_F_derivatives(beta, theta):
    """F(θ) = Φ(β−θ) − Φ(−β−θ) and its first three θ-derivatives."""
    beta, theta = _check_window(beta, theta)
    mass = std_normal_cdf_diff(-beta - theta, beta - theta)
    return FDerivatives(mass, *_f_family(beta, theta, 0.0))


def gauss_F_ratios(beta, theta):
    """(F′/F, F″/F, F‴/F), evaluated in log space so far tails do not underflow."""
    beta, theta = _check_window(beta, theta)
    log_mass = log_std_normal_cdf_diff(-beta - theta, beta - theta)
    return _f_family(beta, theta, log_mass)


def log_abs_expm1(x):
    """ln|e^x − 1| for x ≠ 0, without overflow for large x."""
    if x > 0.0:
        return x + math.log(-math.expm1(-x))
    return math.log(-math.expm1(x))


def expm1_ratio(x):
    """(e^x − 1)/x with the removable point at 0."""
    if abs(x) < 1e-8:
        return 1.0 + 0.5 * x + x * x / 6.0
    return math.expm1(x) / x


def log_expm1_ratio(x):
    """ln((e^x − 1)/x), finite for every real x."""
    if abs(x) < 1e-8:
        return 0.5 * x + x * x / 24.0
    return log_abs_expm1(x) - math.log(abs(x))
