import logging
import math
from dataclasses import dataclass
from functools import cached_property

from common.distributions import ProxyCase, ProxyResult, TruncatedDistribution, TruncationInterval
from common.exceptions import DomainError
from common.special_functions import (
    log_std_normal_cdf_diff,
    std_normal_log_pdf,
    truncated_normal_centre_offset,
    truncated_normal_moments,
)

logger = logging.getLogger(__name__)

# |α + β| below this is treated as the symmetric case (removable 0/0 in case (i)).
SYMMETRY_SWITCH = 1e-8

# Half-width added to |α| + |β| for the default certification window.
WINDOW_MARGIN = 12.0
# θ extent used when an endpoint is infinite; the supremum is only reached asymptotically.
UNBOUNDED_WINDOW = 1e5

GAP_FLOOR = 1e-14


@dataclass(frozen=True)
class TruncatedGaussian(TruncatedDistribution):
    """N(μ, σ²) conditioned on the interval (a, b)."""

    mu: float
    sigma: float
    interval: TruncationInterval

    family = "gaussian"

    def __post_init__(self):
        if not isinstance(self.interval, TruncationInterval):
            object.__setattr__(self, "interval", TruncationInterval(*self.interval))
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise DomainError(f"sigma must be positive and finite, got {self.sigma}")

    @classmethod
    def standard(cls, alpha, beta):
        return cls(0.0, 1.0, TruncationInterval(alpha, beta))

    @property
    def alpha(self):
        return (self.interval.a - self.mu) / self.sigma

    @property
    def beta(self):
        return (self.interval.b - self.mu) / self.sigma

    @property
    def theta0(self):
        """(α + β)/2, defined only for a bounded interval."""
        if not self.interval.is_bounded:
            return None
        return 0.5 * (self.alpha + self.beta)

    def standardized(self):
        return TruncatedGaussian.standard(self.alpha, self.beta)

    @cached_property
    def _log_mass(self):
        return log_std_normal_cdf_diff(self.alpha, self.beta)

    @cached_property
    def _standard_moments(self):
        return truncated_normal_moments(self.alpha, self.beta)

    def density(self, x):
        if not self.interval.contains(x):
            return 0.0
        z = (x - self.mu) / self.sigma
        return math.exp(std_normal_log_pdf(z) - self._log_mass) / self.sigma

    def mean(self):
        return self.mu + self.sigma * self._standard_moments[0]

    def variance(self):
        return self.sigma ** 2 * self._standard_moments[1]

    def log_centered_mgf(self, theta):
        """ln E[exp(θ(X − E X))], with the mass ratio taken in log space."""
        t = self.sigma * theta
        shifted = log_std_normal_cdf_diff(self.alpha - t, self.beta - t)
        return -t * self._standard_moments[0] + 0.5 * t * t + shifted - self._log_mass

    def _standard_proxy(self):
        alpha, beta = self.alpha, self.beta
        if not self.interval.is_bounded:
            if self.interval.lower.is_neg_inf and self.interval.upper.is_pos_inf:
                return 1.0, ProxyCase.UNTRUNCATED
            return 1.0, ProxyCase.SEMI_INFINITE
        total = alpha + beta
        if abs(total) < SYMMETRY_SWITCH:
            if total != 0.0:
                logger.debug("near-symmetric window (%r, %r): using half-width form", alpha, beta)
            half = 0.5 * (beta - alpha)
            # symmetric windows are strictly sub-Gaussian: the proxy is the variance of (−h, h)
            return truncated_normal_moments(-half, half)[1], ProxyCase.SYMMETRIC_FINITE
        # 1 − 2c/(α + β) with c − (α + β)/2 taken directly
        offset = truncated_normal_centre_offset(alpha, beta)
        return -2.0 * offset / total, ProxyCase.ASYMMETRIC_FINITE

    def variance_proxy(self):
        proxy, case = self._standard_proxy()
        return ProxyResult(
            variance_proxy=self.sigma ** 2 * proxy,
            variance=self.variance(),
            case_tag=case,
        )

    def strictness_gap(self):
        result = self.variance_proxy()
        if result.is_strict:
            return 0.0
        gap = result.gap
        return gap if gap > GAP_FLOOR else 0.0

    def proxy_ceiling(self):
        return min(self.sigma ** 2, self.hoeffding_bound())

    def theta_window(self):
        if self.interval.is_bounded:
            extent = abs(self.alpha) + abs(self.beta) + WINDOW_MARGIN
        else:
            extent = UNBOUNDED_WINDOW
        extent /= self.sigma
        return -extent, extent

    def params(self):
        return {"mu": self.mu, "sigma": self.sigma, **self.interval.as_dict()}
