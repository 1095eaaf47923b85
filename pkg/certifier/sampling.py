"""
Inverse-transform samplers for the truncated families and the Monte-Carlo
summary attached to `certify --monte-carlo`.
"""
import logging
import math
from functools import singledispatch

import numpy as np
from scipy import special

from common.exceptions import DomainError
from exponential.distribution import TruncatedExponential
from gaussian.distribution import TruncatedGaussian

logger = logging.getLogger(__name__)


def _inside(values, interval):
    """Round-off can land a draw on an endpoint; pull it back into the open interval."""
    lo, hi = interval.a, interval.b
    return np.clip(values, np.nextafter(lo, hi), np.nextafter(hi, lo))


@singledispatch
def sample(distribution, n, seed):
    raise DomainError(f"no sampler for {type(distribution).__name__}")


def _log_space_normal(lo, hi, rng, n):
    """Inverse-CDF draws of N(0, 1) on (lo, hi) for lo ≤ 0.

    u = (1 − v)Φ(lo) + vΦ(hi) is formed as a log-sum so Φ may underflow.
    """
    log_lo, log_hi = special.log_ndtr(lo), special.log_ndtr(hi)
    v = rng.uniform(size=n)
    with np.errstate(divide="ignore"):
        log_u = np.logaddexp(np.log1p(-v) + log_lo, np.log(v) + log_hi)
    return special.ndtri_exp(log_u)


@sample.register
def _(distribution: TruncatedGaussian, n, seed):
    rng = np.random.default_rng(seed)
    alpha, beta = distribution.alpha, distribution.beta
    if alpha > 0.0:
        # upper tail: draw −X on (−β, −α), where Φ keeps its resolution
        z = -_log_space_normal(-beta, -alpha, rng, n)
    else:
        z = _log_space_normal(alpha, beta, rng, n)
    return _inside(distribution.mu + distribution.sigma * z, distribution.interval)


@sample.register
def _(distribution: TruncatedExponential, n, seed):
    rng = np.random.default_rng(seed)
    epsilon = distribution.epsilon
    top = 1.0 if math.isinf(epsilon) else -math.expm1(-epsilon)
    v = rng.uniform(0.0, top, size=n)
    y = distribution.alpha - np.log1p(-v)
    return _inside(y / distribution.rate, distribution.interval)


def _natural_scale(distribution):
    if isinstance(distribution, TruncatedGaussian):
        return distribution.sigma
    return 1.0 / distribution.rate


def monte_carlo_summary(distribution, n, seed):
    n = int(n)
    if n < 2:
        raise DomainError(f"monte-carlo sample size must be at least 2, got {n}")
    draws = sample(distribution, n, seed)
    mean = distribution.mean()
    theta = 1.0 / _natural_scale(distribution)
    weights = np.exp(theta * (draws - mean))
    weight_mean = float(weights.mean())
    summary = {
        "n": n,
        "seed": seed,
        "sample_mean": float(draws.mean()),
        "mean": mean,
        "sample_mean_stderr": float(draws.std(ddof=1)) / math.sqrt(n),
        "theta": theta,
        "empirical_log_mgf": math.log(weight_mean),
        "empirical_log_mgf_stderr": float(weights.std(ddof=1)) / (math.sqrt(n) * weight_mean),
        "log_mgf": distribution.log_centered_mgf(theta),
    }
    logger.debug("monte-carlo summary: %s", summary)
    return summary
