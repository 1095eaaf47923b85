import logging
import math
from dataclasses import dataclass

from common.distributions import ProxyCase, ProxyResult, TruncatedDistribution, TruncationInterval
from common.exceptions import DomainError, NotSubGaussianError
from common.special_functions import log_expm1_ratio

from .series import SINH_EXCESS_LIMIT, gap_kernel_scaled, sinh_excess

logger = logging.getLogger(__name__)

# |θ/λ − 1| below this takes the Taylor branch of the removable singularity.
SINGULAR_BAND = 1e-7
# Below this width sinh(ε/2) − ε/2 is summed from its series.
SERIES_SWITCH = 2.0 * SINH_EXCESS_LIMIT
# Below this width the gap is the two-term series ε⁴/360 − ε⁶/7560.
TINY_WIDTH = 1e-4


def standard_mean(alpha, epsilon):
    """E[Y] for Y ~ Exp(1) restricted to (α, α + ε); ε may be +∞."""
    if math.isinf(epsilon):
        return alpha + 1.0
    return alpha + 1.0 - epsilon / math.expm1(epsilon)


def standard_variance(epsilon):
    """1 − ε²e^ε/(e^ε − 1)², i.e. (sinh h − h)(sinh h + h)/sinh² h with h = ε/2."""
    half = 0.5 * epsilon
    if half > 350.0:
        return 1.0
    sinh = math.sinh(half)
    return sinh_excess(half) / sinh * ((sinh + half) / sinh)


def standard_proxy(epsilon):
    """(ε/2)·coth(ε/2) − 1, evaluated as variance plus gap."""
    if math.isinf(epsilon):
        return math.inf
    return standard_variance(epsilon) + standard_gap(epsilon)


def standard_gap(epsilon):
    """Proxy minus variance, e^ε·K(ε) / (2(e^ε − 1)²) written with e^{-ε} factored out."""
    if epsilon < TINY_WIDTH:
        return epsilon ** 4 / 360.0 * (1.0 - epsilon * epsilon / 21.0)
    return gap_kernel_scaled(epsilon) / (2.0 * math.expm1(-epsilon) ** 2)


@dataclass(frozen=True)
class TruncatedExponential(TruncatedDistribution):
    """Exp(λ) conditioned on (a, b) with 0 ≤ a < b ≤ +∞."""

    rate: float
    interval: TruncationInterval

    family = "exponential"

    def __post_init__(self):
        if not isinstance(self.interval, TruncationInterval):
            object.__setattr__(self, "interval", TruncationInterval(*self.interval))
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise DomainError(f"lambda must be positive and finite, got {self.rate}")
        if not (self.interval.lower.is_finite and self.interval.a >= 0.0):
            raise DomainError(f"lower endpoint must be finite and nonnegative, got {self.interval.lower}")

    @classmethod
    def standard(cls, alpha, beta):
        return cls(1.0, TruncationInterval(alpha, beta))

    @property
    def alpha(self):
        return self.rate * self.interval.a

    @property
    def beta(self):
        return self.rate * self.interval.b

    @property
    def epsilon(self):
        return self.beta - self.alpha

    def standardized(self):
        return TruncatedExponential.standard(self.alpha, self.beta)

    def _require_bounded(self, what):
        if not self.interval.upper.is_finite:
            raise NotSubGaussianError(
                f"{what}: an exponential truncated to ({self.interval.lower}, +inf) is not sub-Gaussian; "
                "b must be finite"
            )

    def density(self, t):
        if not self.interval.contains(t):
            return 0.0
        mass = 1.0 if math.isinf(self.epsilon) else -math.expm1(-self.epsilon)
        return self.rate * math.exp(-self.rate * (t - self.interval.a)) / mass

    def _standard_mean(self):
        return standard_mean(self.alpha, self.epsilon)

    def mean(self):
        return self._standard_mean() / self.rate

    def variance(self):
        self._require_bounded("variance")
        return standard_variance(self.epsilon) / self.rate ** 2

    def log_centered_mgf(self, theta):
        u = theta / self.rate
        alpha, epsilon = self.alpha, self.epsilon
        m = self._standard_mean()
        if math.isinf(epsilon):
            if u >= 1.0:
                return math.inf
            return -u - math.log1p(-u)
        x = (u - 1.0) * epsilon
        if abs(u - 1.0) < SINGULAR_BAND:
            log_ratio = 0.5 * x + x * x / 24.0
        else:
            log_ratio = log_expm1_ratio(x)
        return u * (alpha - m) + math.log(epsilon) + log_ratio - math.log(-math.expm1(-epsilon))

    def variance_proxy(self):
        self._require_bounded("variance proxy")
        scale = self.rate ** 2
        return ProxyResult(
            variance_proxy=standard_proxy(self.epsilon) / scale,
            variance=standard_variance(self.epsilon) / scale,
            case_tag=ProxyCase.EXPONENTIAL_FINITE,
        )

    def strictness_gap(self):
        self._require_bounded("strictness gap")
        return standard_gap(self.epsilon) / self.rate ** 2

    def theta_window(self):
        upper = 3.0 * self.beta + 10.0 if math.isfinite(self.beta) else 10.0
        return -10.0 * self.rate, upper * self.rate

    def params(self):
        return {"lambda": self.rate, **self.interval.as_dict()}
