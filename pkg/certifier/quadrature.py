import logging
import math

from scipy import integrate

from common.exceptions import DomainError, EvaluationError

logger = logging.getLogger(__name__)

EPSABS = 1e-13
EPSREL = 1e-12
LIMIT = 200


def _integrate(integrand, lower, upper, theta):
    result = integrate.quad(integrand, lower, upper, epsabs=EPSABS, epsrel=EPSREL, limit=LIMIT, full_output=1)
    # quad appends a message only when it could not meet the tolerance
    if len(result) > 3:
        logger.warning("quadrature did not converge at theta=%r on (%r, %r): %s", theta, lower, upper, result[3])
        raise EvaluationError(f"quadrature did not converge at theta={theta!r}", theta=theta)
    return result[0]


def quadrature_mean(density, support):
    lower, upper = (float(end) for end in support)
    mass = _integrate(density, lower, upper, 0.0)
    return _integrate(lambda x: x * density(x), lower, upper, 0.0) / mass


def log_cmgf_quadrature(density, support, theta, mean=None):
    """
    ln ∫ e^{θ(x − m)} f(x) dx / ∫ f(x) dx with m the quadrature mean of f.

    On a bounded support the exponential is taken relative to the endpoint
    where it peaks, so the integrand never exceeds f.
    """
    lower, upper = (float(end) for end in support)
    if not lower < upper:
        raise DomainError(f"support needs lower < upper, got ({lower}, {upper})")
    theta = float(theta)
    m = quadrature_mean(density, (lower, upper)) if mean is None else float(mean)
    if theta > 0.0 and math.isfinite(upper):
        anchor = upper
    elif theta < 0.0 and math.isfinite(lower):
        anchor = lower
    else:
        anchor = m
    mass = _integrate(density, lower, upper, theta)
    weighted = _integrate(lambda x: math.exp(theta * (x - anchor)) * density(x), lower, upper, theta)
    if not (weighted > 0.0 and mass > 0.0):
        raise EvaluationError(f"quadrature returned a nonpositive integral at theta={theta!r}", theta=theta)
    return theta * (anchor - m) + math.log(weighted) - math.log(mass)
