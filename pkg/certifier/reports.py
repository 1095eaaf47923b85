import logging

from .oracle import certify_distribution, default_grid
from .sampling import monte_carlo_summary

logger = logging.getLogger(__name__)

# Smallest agreement threshold between the closed form and the certified value.
AGREEMENT_FLOOR = 1e-4


def agreement_threshold(tol):
    return max(AGREEMENT_FLOOR, 10.0 * tol)


def certify_document(distribution, tol, n_points, refinement_rounds, theta_max=None, monte_carlo=None, seed=None):
    """The `certify` JSON document: closed form against the bisection oracle."""
    closed_form = distribution.variance_proxy().variance_proxy
    grid = default_grid(distribution, n_points, refinement_rounds, theta_max)
    certificate = certify_distribution(distribution, tol, grid)
    document = {
        "closed_form": closed_form,
        "certified": certificate.s_squared,
        "abs_diff": abs(certificate.s_squared - closed_form),
        "theta_star": certificate.theta_star,
        "evaluations": certificate.evaluations,
    }
    if monte_carlo:
        document["monte_carlo"] = monte_carlo_summary(distribution, monte_carlo, seed)
    logger.info(
        "%s %s: closed form %.10g, certified %.10g", distribution.family, distribution.params(), closed_form,
        certificate.s_squared,
    )
    return document


def is_verified(document, tol):
    return document["abs_diff"] <= agreement_threshold(tol)
