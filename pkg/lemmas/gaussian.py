"""
Evaluable forms of the functions the Gaussian proof works with, in the
standardized frame (μ = 0, σ = 1) on (α, β):

    F(θ) = Φ(β − θ) − Φ(α − θ),   f(θ) = ln(F(θ)/F(0)),   h = f′
    p_w(θ) = wθ² + cθ,             the parabola (s²θ²/2 − θ²/2 + cθ) with w = (s² − 1)/2

and the symmetric-window quantities Z_β, S_β, S̃_β, A_β.
"""
import math
from dataclasses import dataclass
from functools import cached_property

from common.exceptions import DomainError
from common.special_functions import (
    LOG_SQRT_2PI,
    gauss_F_derivatives,
    gauss_F_ratios,
    log_std_normal_cdf_diff,
    std_normal_cdf_diff,
    std_normal_pdf,
    truncated_normal_mean,
    truncated_normal_moments,
)
from gaussian.distribution import SYMMETRY_SWITCH, TruncatedGaussian


@dataclass(frozen=True)
class GaussFrame:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("frame endpoints must be finite")
        if not self.alpha < self.beta:
            raise DomainError(f"frame needs alpha < beta, got ({self.alpha}, {self.beta})")

    @cached_property
    def log_mass(self):
        return log_std_normal_cdf_diff(self.alpha, self.beta)

    @cached_property
    def c(self):
        return truncated_normal_mean(self.alpha, self.beta, self.log_mass)

    @property
    def theta0(self):
        return 0.5 * (self.alpha + self.beta)

    @property
    def half_width(self):
        return 0.5 * (self.beta - self.alpha)

    @property
    def is_symmetric(self):
        return abs(self.alpha + self.beta) < SYMMETRY_SWITCH

    def distribution(self):
        return TruncatedGaussian.standard(self.alpha, self.beta)


def gauss_f(frame, theta):
    return log_std_normal_cdf_diff(frame.alpha - theta, frame.beta - theta) - frame.log_mass


def gauss_h(frame, theta):
    """f′(θ): the mean of N(0, 1) restricted to (α − θ, β − θ)."""
    return truncated_normal_mean(frame.alpha - theta, frame.beta - theta)


def gauss_h_prime(frame, theta):
    """f″(θ): the variance of N(0, 1) restricted to (α − θ, β − θ), minus 1."""
    return truncated_normal_moments(frame.alpha - theta, frame.beta - theta)[1] - 1.0


def gauss_h_second_terms(frame, theta):
    """The three terms of Z/F³ in the symmetric window (−β̃, β̃) at θ − θ₀."""
    r1, r2, r3 = gauss_F_ratios(frame.half_width, theta - frame.theta0)
    return r3, -3.0 * r1 * r2, 2.0 * r1 ** 3


def gauss_h_second(frame, theta):
    return math.fsum(gauss_h_second_terms(frame, theta))


def gauss_w_c(frame):
    if frame.is_symmetric:
        half = frame.half_width
        return -half * std_normal_pdf(half) / std_normal_cdf_diff(-half, half)
    return -frame.c / (frame.alpha + frame.beta)


def gauss_parabola(frame, theta, w=None):
    w = gauss_w_c(frame) if w is None else w
    return (w * theta + frame.c) * theta


def gauss_parabola_slope(frame, theta, w=None):
    w = gauss_w_c(frame) if w is None else w
    return 2.0 * w * theta + frame.c


def gauss_Z_terms(beta, theta):
    F, d1, d2, d3 = gauss_F_derivatives(beta, theta)
    return F * F * d3, -3.0 * F * d1 * d2, 2.0 * d1 ** 3


def gauss_Z(beta, theta):
    """F²F‴ − 3FF′F″ + 2F′³ for the window (−β, β); the numerator of h″."""
    return math.fsum(gauss_Z_terms(beta, theta))


def gauss_S_terms(beta, theta):
    _, d1, d2, _ = gauss_F_derivatives(beta, theta)
    b2, t2 = beta * beta, theta * theta
    return (
        9.0 * theta * d2 ** 5,
        (42.0 * t2 - 9.0) * d1 * d2 ** 4,
        -(15.0 * b2 - 79.0 * t2 + 30.0) * theta * d1 ** 2 * d2 ** 3,
        (75.0 * t2 * t2 - (42.0 * b2 + 36.0) * t2 - b2 * b2 + 12.0 * b2 - 3.0) * d1 ** 3 * d2 ** 2,
        4.0 * (9.0 * t2 * t2 - (10.0 * b2 + 4.5) * t2 + b2 * b2 + 4.5 * b2 - 1.5) * theta * d1 ** 4 * d2,
        (
            7.0 * t2 ** 3
            - (13.0 * b2 + 3.0) * t2 * t2
            + (5.0 * b2 * b2 + 6.0 * b2 - 3.0) * t2
            + (b2 - 1.0) ** 3
        ) * d1 ** 5,
    )


def gauss_S(beta, theta):
    """Polynomial in (F′, F″) whose positivity on θ > 0 gives the zero count of F‴."""
    if not theta > 0.0:
        raise DomainError(f"theta must be positive, got {theta}")
    return math.fsum(gauss_S_terms(beta, theta))


def gauss_A(beta, s):
    """S̃_β written in the variable s = βθ."""
    b2 = beta * beta
    b4, b6, s2 = b2 * b2, b2 * b2 * b2, s * s
    return math.fsum((
        math.sinh(5.0 * s),
        (4.0 * b6 + 24.0 * b4 + 12.0 * s2 * b2 + 12.0 * b2 - 5.0) * math.sinh(3.0 * s),
        (-12.0 * b6 + 72.0 * b4 + 12.0 * s2 * b2 - 36.0 * b2 + 10.0) * math.sinh(s),
        -4.0 * (3.0 * b4 + 6.0 * b2 + s2) * s * math.cosh(3.0 * s),
        4.0 * (-33.0 * b4 + 6.0 * b2 + s2) * s * math.cosh(s),
    ))


def gauss_S_tilde(beta, theta):
    return gauss_A(beta, beta * theta)


def gauss_S_prefactor(beta, theta):
    """S_β(θ) = 2·w⁵·S̃_β(θ) with w = e^{−(θ² + β²)/2}/√(2π)."""
    weight = math.exp(-0.5 * (theta * theta + beta * beta) - LOG_SQRT_2PI)
    return 2.0 * weight ** 5
