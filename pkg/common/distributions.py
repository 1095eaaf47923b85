"""
Value types shared by the truncated families: the truncation interval, the
proxy result and the abstract base every family implements.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum

from .exceptions import DomainError
from .special_functions import ExtendedReal, as_extended


class ProxyCase(str, Enum):
    ASYMMETRIC_FINITE = "asymmetric-finite"
    SYMMETRIC_FINITE = "symmetric-finite"
    SEMI_INFINITE = "semi-infinite"
    UNTRUNCATED = "untruncated"
    EXPONENTIAL_FINITE = "exponential-finite"

    @property
    def is_strict(self):
        return self in (ProxyCase.SYMMETRIC_FINITE, ProxyCase.UNTRUNCATED)


@dataclass(frozen=True)
class TruncationInterval:
    """Open interval (lower, upper) with extended-real ends, lower < upper."""

    lower: ExtendedReal
    upper: ExtendedReal

    def __post_init__(self):
        lower, upper = as_extended(self.lower), as_extended(self.upper)
        if not lower < upper:
            raise DomainError(f"truncation interval needs lower < upper, got ({lower}, {upper})")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def a(self):
        return float(self.lower)

    @property
    def b(self):
        return float(self.upper)

    @property
    def is_bounded(self):
        return self.lower.is_finite and self.upper.is_finite

    @property
    def width(self):
        return self.b - self.a

    def contains(self, x):
        return self.a < x < self.b

    def hoeffding_bound(self):
        """(b − a)²/4, the proxy every variable supported on [a, b] admits."""
        return 0.25 * self.width ** 2 if self.is_bounded else math.inf

    def as_dict(self):
        return {"a": self.lower.to_json(), "b": self.upper.to_json()}


@dataclass(frozen=True)
class ProxyResult:
    variance_proxy: float
    variance: float
    case_tag: ProxyCase

    # used only for consistency checks; strictness itself comes from the case
    STRICTNESS_RTOL = 1e-12

    def __post_init__(self):
        if self.variance_proxy < self.variance * (1.0 - self.STRICTNESS_RTOL):
            raise DomainError(
                f"variance proxy {self.variance_proxy!r} below variance {self.variance!r}"
            )

    @property
    def is_strict(self):
        return self.case_tag.is_strict

    @property
    def gap(self):
        return self.variance_proxy - self.variance

    def as_dict(self):
        return {
            "variance": self.variance,
            "variance_proxy": self.variance_proxy,
            "is_strict": self.is_strict,
            "case_tag": self.case_tag.value,
        }


class TruncatedDistribution(ABC):
    """Reusable base for truncated families: shared derived values and the JSON document."""

    family = None
    interval: TruncationInterval

    @abstractmethod
    def density(self, x): ...

    @abstractmethod
    def mean(self): ...

    @abstractmethod
    def variance(self): ...

    @abstractmethod
    def log_centered_mgf(self, theta): ...

    @abstractmethod
    def variance_proxy(self): ...

    @abstractmethod
    def strictness_gap(self): ...

    @abstractmethod
    def params(self): ...

    @abstractmethod
    def theta_window(self):
        """(θ_min, θ_max) wide enough to contain every tangency point."""

    def centered_mgf(self, theta):
        return math.exp(self.log_centered_mgf(theta))

    def hoeffding_bound(self):
        return self.interval.hoeffding_bound()

    def proxy_ceiling(self):
        """Largest value the optimal proxy can take: the Hoeffding bound."""
        return self.hoeffding_bound()

    def as_dict(self):
        result = self.variance_proxy()
        return {
            "family": self.family,
            "params": self.params(),
            "mean": self.mean(),
            "variance": result.variance,
            "variance_proxy": result.variance_proxy,
            "is_strict": result.is_strict,
            "case_tag": result.case_tag.value,
        }
