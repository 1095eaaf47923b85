"""
Evaluable forms of the functions the exponential proof works with, for
Y ~ Exp(1) restricted to (α, β), ε = β − α, m = E[Y]:

    g(θ) = E[e^{θ(Y − m)}] − e^{s²θ²/2}
    G(θ) = (e^β − e^α)·e^{−s²θ²/2}·g(θ)
    G′(θ) = e^{αθ + β − s²θ²/2 − mθ}·h(θ)/(θ − 1)²
"""
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import NamedTuple

from common.exceptions import DomainError
from common.special_functions import log_expm1_ratio
from exponential.distribution import TruncatedExponential, standard_mean, standard_variance
from exponential.series import third_cumulant_numerator_scaled


class ExpBounds(NamedTuple):
    s_inf: float
    s_1: float
    s_2: float
    delta: float


@dataclass(frozen=True)
class ExpFrame:
    alpha: float
    beta: float
    s: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= 0.0):
            raise DomainError(f"alpha must be finite and nonnegative, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > self.alpha):
            raise DomainError(f"beta must be finite and above alpha, got {self.beta}")
        if not self.s > 0.0:
            raise DomainError(f"s must be positive, got {self.s}")

    @property
    def epsilon(self):
        return self.beta - self.alpha

    @cached_property
    def mean(self):
        return standard_mean(self.alpha, self.epsilon)

    @cached_property
    def distribution(self):
        return TruncatedExponential.standard(self.alpha, self.beta)

    def with_s(self, s):
        return replace(self, s=s)

    @property
    def coefficients(self):
        """(A, B, C) of the quadratic P(θ) = Aθ² + Bθ + C."""
        eps, s2, m = self.epsilon, self.s * self.s, self.mean
        alpha, beta = self.alpha, self.beta
        a = -s2 * eps * eps
        b = (alpha - beta) * (alpha - beta + 6.0) * s2 + eps * eps * (beta - m)
        c = 3.0 * (eps - 2.0) * s2 + eps * ((eps - 3.0) * m + alpha * beta - beta * beta + alpha + 2.0 * beta)
        return a, b, c


def exp_g(frame, theta):
    log_mgf = frame.distribution.log_centered_mgf(theta)
    return math.exp(log_mgf) - math.exp(0.5 * frame.s ** 2 * theta * theta)


def exp_G(frame, theta):
    # the (θ − 1)^{-1}(…) part equals ε·e^{(α−m)θ + β − s²θ²/2}·(e^{x} − 1)/x with x = (θ − 1)ε
    eps = frame.epsilon
    log_tail = -0.5 * frame.s ** 2 * theta * theta + (frame.alpha - frame.mean) * theta + frame.beta
    tail = eps * math.exp(log_tail + log_expm1_ratio((theta - 1.0) * eps))
    return math.exp(frame.alpha) - math.exp(frame.beta) + tail


def exp_h(frame, theta):
    s2, m = frame.s ** 2, frame.mean
    alpha, beta = frame.alpha, frame.beta
    leading = -s2 * theta * theta + (s2 + beta - m) * theta + m - beta - 1.0
    trailing = s2 * theta * theta - (s2 + alpha - m) * theta - m + alpha + 1.0
    return leading * math.exp((theta - 1.0) * frame.epsilon) + trailing


def exp_P(frame, theta):
    a, b, c = frame.coefficients
    return (a * theta + b) * theta + c


def exp_h_third(frame, theta):
    """h‴(θ) = ε·e^{(θ−1)ε}·P(θ)."""
    eps = frame.epsilon
    return eps * math.exp((theta - 1.0) * eps) * exp_P(frame, theta)


def exp_G_prime(frame, theta):
    """G′ from its factorization through h; θ = 1 is a removable point and is rejected."""
    if theta == 1.0:
        raise DomainError("the factorized G′ is undefined at theta = 1")
    log_weight = frame.alpha * theta + frame.beta - 0.5 * frame.s ** 2 * theta * theta - frame.mean * theta
    return math.exp(log_weight) * exp_h(frame, theta) / (theta - 1.0) ** 2


def exp_discriminant(frame):
    """B² − 4AC at the frame's s."""
    a, b, c = frame.coefficients
    return b * b - 4.0 * a * c


def exp_bounds(frame):
    eps = frame.epsilon
    lag = frame.beta - frame.mean
    radicand = eps * eps * (lag + 1.0) - 3.0 * lag * lag
    if radicand < 0.0:
        raise DomainError(
            f"negative radicand {radicand!r} in delta for (alpha, beta) = ({frame.alpha}, {frame.beta})"
        )
    delta = 2.0 * eps * math.sqrt(radicand)
    centre = eps * eps * (lag + 2.0)
    denominator = eps * eps + 12.0
    lower = (centre - delta) / denominator
    if lower <= 0.0:
        raise DomainError(f"s_1 squared is not positive for (alpha, beta) = ({frame.alpha}, {frame.beta})")
    return ExpBounds(
        s_inf=math.sqrt(standard_variance(eps)),
        s_1=math.sqrt(lower),
        s_2=math.sqrt((centre + delta) / denominator),
        delta=delta,
    )


def exp_g3_at_zero(alpha, epsilon):
    """g‴(0) = P(ε)/(e^ε − 1)³, the third cumulant of the standardized variable."""
    if not (epsilon > 0.0 and math.isfinite(epsilon)):
        raise DomainError(f"epsilon must be positive and finite, got {epsilon}")
    return third_cumulant_numerator_scaled(epsilon) / (-math.expm1(-epsilon)) ** 3
