import math

import numpy as np
from django.test import SimpleTestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APIClient
from scipy import stats

from common.distributions import TruncationInterval
from common.exceptions import BracketError, DomainError, EvaluationError
from exponential.distribution import TruncatedExponential
from gaussian.distribution import TruncatedGaussian

from .oracle import (
    CERTIFICATION_SLACK,
    GridSpec,
    certify_distribution,
    certify_optimal_proxy,
    check_proxy,
    default_grid,
)
from .quadrature import log_cmgf_quadrature, quadrature_mean
from .reports import agreement_threshold, certify_document, is_verified
from .sampling import monte_carlo_summary, sample


def quadratic(scale):
    return lambda theta: 0.5 * scale * theta * theta


class GridSpecTests(SimpleTestCase):
    def test_symmetric_and_windowed_grids(self):
        grid = GridSpec(theta_max=5.0, n_points=101)
        self.assertEqual(grid.lower, -5.0)
        self.assertAlmostEqual(grid.spacing, 0.1)
        self.assertEqual(len(grid.nodes()), 101)
        window = GridSpec.for_window((-1.0, 3.0), n_points=201, refinement_rounds=0)
        self.assertEqual(window.lower, -1.0)
        self.assertAlmostEqual(window.spacing, 0.02)

    def test_rejects_bad_grids(self):
        for kwargs in (
            {"theta_max": 0.0},
            {"theta_max": math.inf},
            {"theta_max": 1.0, "n_points": 50},
            {"theta_max": 1.0, "refinement_rounds": -1},
            {"theta_max": 1.0, "theta_min": 1.0},
        ):
            with self.subTest(**kwargs), self.assertRaises(DomainError):
                GridSpec(**kwargs)

    def test_default_grid_follows_the_distribution_window(self):
        distribution = TruncatedExponential.standard(1.0, 4.0)
        grid = default_grid(distribution, n_points=1001)
        self.assertEqual((grid.lower, grid.theta_max), distribution.theta_window())
        self.assertEqual(default_grid(distribution, theta_max=7.0).lower, -7.0)


class ProxyCheckTests(SimpleTestCase):
    def setUp(self):
        self.grid = GridSpec(theta_max=4.0, n_points=401)

    def test_check_holds_at_and_above_the_exact_proxy(self):
        self.assertTrue(check_proxy(quadratic(1.0), 1.0, self.grid).holds)
        self.assertTrue(check_proxy(quadratic(1.0), 1.5, self.grid).holds)

    def test_check_fails_below_and_reports_the_worst_theta(self):
        result = check_proxy(quadratic(1.0), 0.99, self.grid)
        self.assertFalse(result.holds)
        self.assertEqual(abs(result.theta_star), 4.0)
        self.assertAlmostEqual(result.max_residual, 0.5 * 0.01 * 16.0, delta=1e-12)
        self.assertGreater(result.evaluations, 401)

    def test_refinement_finds_peaks_between_nodes(self):
        def bump(theta):
            # height 1e-7, centred between coarse nodes
            return 1e-7 * math.exp(-((theta - 1.0051) / 0.002) ** 2)

        coarse = check_proxy(bump, 0.0, GridSpec(theta_max=4.0, n_points=401, refinement_rounds=0))
        refined = check_proxy(bump, 0.0, self.grid)
        self.assertGreater(refined.max_residual, coarse.max_residual)
        self.assertAlmostEqual(refined.theta_star, 1.0051, delta=1e-3)

    def test_non_finite_log_mgf_is_an_evaluation_error(self):
        unbounded = TruncatedExponential(1.0, TruncationInterval(0.0, "+inf"))
        with self.assertRaises(EvaluationError) as ctx:
            check_proxy(unbounded.log_centered_mgf, 1.0, GridSpec(theta_max=2.0, n_points=101))
        self.assertGreaterEqual(ctx.exception.theta, 1.0)

    def test_negative_candidate_is_rejected(self):
        with self.assertRaises(DomainError):
            check_proxy(quadratic(1.0), -0.1, self.grid)


class BisectionTests(SimpleTestCase):
    def setUp(self):
        self.grid = GridSpec(theta_max=3.0, n_points=301)

    def test_bisection_converges_on_a_quadratic(self):
        certificate = certify_optimal_proxy(quadratic(0.8), 0.1, 2.0, 1e-8, self.grid)
        lo, hi = certificate.bracket
        self.assertLessEqual(hi - lo, 1e-8)
        self.assertAlmostEqual(certificate.s_squared, 0.8, delta=1e-7)
        self.assertEqual(certificate.as_dict()["grid"]["n_points"], 301)

    def test_bracket_errors(self):
        with self.assertRaises(BracketError):
            certify_optimal_proxy(quadratic(1.0), 2.0, 1.0, 1e-6, self.grid)
        with self.assertRaises(BracketError):
            certify_optimal_proxy(quadratic(1.0), 1.5, 2.0, 1e-6, self.grid)
        with self.assertRaises(BracketError):
            certify_optimal_proxy(quadratic(1.0), 0.1, 0.5, 1e-6, self.grid)
        with self.assertRaises(DomainError):
            certify_optimal_proxy(quadratic(1.0), 0.1, 2.0, 0.0, self.grid)


class CertifyDistributionTests(SimpleTestCase):
    def test_exponential_reference_window(self):
        distribution = TruncatedExponential.standard(1.0, 4.0)
        certificate = certify_distribution(distribution, tol=1e-6)
        self.assertAlmostEqual(certificate.s_squared, 0.6571864, delta=1e-5)
        self.assertAlmostEqual(certificate.theta_star, 2.0, delta=0.05)
        self.assertLessEqual(certificate.max_residual, CERTIFICATION_SLACK)

    def test_asymmetric_gaussian_tangency(self):
        distribution = TruncatedGaussian.standard(-2.0, 0.5)
        certificate = certify_distribution(distribution, tol=1e-6)
        closed_form = distribution.variance_proxy().variance_proxy
        self.assertAlmostEqual(certificate.s_squared, closed_form, delta=1e-5)
        self.assertAlmostEqual(certificate.theta_star, -1.5, delta=0.05)

    def test_symmetric_gaussian_certifies_at_the_variance(self):
        distribution = TruncatedGaussian.standard(-2.0, 2.0)
        certificate = certify_distribution(distribution, grid=default_grid(distribution, n_points=2001))
        self.assertEqual(certificate.s_squared, distribution.variance())
        self.assertEqual(certificate.bracket, (distribution.variance(), distribution.variance()))

    def test_semi_infinite_gaussian_approaches_unit_proxy(self):
        distribution = TruncatedGaussian(0.0, 1.0, TruncationInterval(0.0, "+inf"))
        certificate = certify_distribution(distribution, tol=1e-6)
        self.assertAlmostEqual(certificate.s_squared, 1.0, delta=1e-4)
        self.assertLessEqual(certificate.s_squared, 1.0 + CERTIFICATION_SLACK)


class AgreementTests(SimpleTestCase):
    """Closed forms against the oracle on randomized windows."""

    def test_asymmetric_gaussian_windows(self):
        rng = np.random.default_rng(20240601)
        for _ in range(4):
            alpha = rng.uniform(-3.0, -0.5)
            beta = -alpha + rng.uniform(0.5, 3.0)
            with self.subTest(alpha=alpha, beta=beta):
                distribution = TruncatedGaussian.standard(alpha, beta)
                document = certify_document(distribution, tol=1e-6, n_points=2001, refinement_rounds=2)
                self.assertTrue(is_verified(document, 1e-6), document)

    def test_gaussian_windows_on_a_fixed_grid(self):
        for alpha in (-3.0, -1.0, 0.0, 0.5, 1.0):
            for width in (0.5, 1.0, 2.0, 4.0, 8.0):
                beta = alpha + width
                with self.subTest(alpha=alpha, beta=beta):
                    distribution = TruncatedGaussian.standard(alpha, beta)
                    closed_form = distribution.variance_proxy().variance_proxy
                    certificate = certify_distribution(
                        distribution, tol=1e-6, grid=default_grid(distribution, n_points=1001)
                    )
                    self.assertAlmostEqual(certificate.s_squared, closed_form, delta=1e-4)

    def test_closed_forms_are_optimal(self):
        cases = (
            TruncatedGaussian.standard(-2.0, 0.5),
            TruncatedGaussian.standard(-1.0, 3.0),
            TruncatedGaussian.standard(0.0, 2.0),
            TruncatedGaussian.standard(0.5, 4.5),
            TruncatedGaussian.standard(1.0, 1.5),
            TruncatedExponential.standard(1.0, 4.0),
            TruncatedExponential.standard(0.0, 0.5),
            TruncatedExponential(2.0, TruncationInterval(0.25, 3.0)),
        )
        for distribution in cases:
            with self.subTest(family=distribution.family, params=distribution.params()):
                proxy = distribution.variance_proxy().variance_proxy
                grid = default_grid(distribution, n_points=1001)
                self.assertTrue(check_proxy(distribution.log_centered_mgf, proxy, grid).holds)
                below = check_proxy(distribution.log_centered_mgf, 0.999 * proxy, grid)
                self.assertFalse(below.holds)
                self.assertGreaterEqual(below.max_residual, 1e-6)

    def test_exponential_windows(self):
        rng = np.random.default_rng(7)
        for _ in range(4):
            alpha = rng.uniform(0.0, 3.0)
            epsilon = rng.uniform(0.5, 8.0)
            with self.subTest(alpha=alpha, epsilon=epsilon):
                distribution = TruncatedExponential(rng.uniform(0.5, 2.0), TruncationInterval(alpha, alpha + epsilon))
                document = certify_document(distribution, tol=1e-6, n_points=2001, refinement_rounds=2)
                self.assertTrue(is_verified(document, 1e-6), document)


class QuadratureTests(SimpleTestCase):
    def test_matches_closed_form_log_mgf(self):
        cases = (
            TruncatedGaussian(0.5, 1.5, TruncationInterval(-1.0, 2.0)),
            TruncatedGaussian(0.0, 1.0, TruncationInterval(0.0, "+inf")),
            TruncatedExponential.standard(1.0, 4.0),
        )
        for distribution in cases:
            support = (distribution.interval.a, distribution.interval.b)
            self.assertAlmostEqual(quadrature_mean(distribution.density, support), distribution.mean(), delta=1e-10)
            for theta in (-2.0, 0.5, 1.0, 3.0):
                with self.subTest(family=distribution.family, params=distribution.params(), theta=theta):
                    self.assertAlmostEqual(
                        log_cmgf_quadrature(distribution.density, support, theta, mean=distribution.mean()),
                        distribution.log_centered_mgf(theta),
                        delta=1e-9,
                    )

    def test_zero_theta_is_exactly_zero(self):
        distribution = TruncatedExponential.standard(0.0, 2.0)
        self.assertEqual(log_cmgf_quadrature(distribution.density, (0.0, 2.0), 0.0), 0.0)

    def test_errors(self):
        with self.assertRaises(DomainError):
            log_cmgf_quadrature(lambda x: 1.0, (1.0, 0.0), 0.5)
        with self.assertRaises(EvaluationError):
            log_cmgf_quadrature(lambda x: 1.0 / (x - 0.41421356237) ** 2, (0.0, 1.0), 0.5, mean=0.5)


class SamplingTests(SimpleTestCase):
    def test_gaussian_samples_follow_the_truncated_law(self):
        for alpha, beta in ((-2.0, 0.5), (8.0, 9.0), (-math.inf, -1.0)):
            with self.subTest(alpha=alpha, beta=beta):
                distribution = TruncatedGaussian.standard(alpha, beta)
                draws = sample(distribution, 4000, seed=3)
                self.assertEqual(draws.shape, (4000,))
                self.assertTrue(np.all((draws > alpha) & (draws < beta)))
                result = stats.kstest(draws, stats.truncnorm(alpha, beta).cdf)
                self.assertGreater(result.pvalue, 1e-3)

    def test_gaussian_samples_beyond_cdf_underflow(self):
        for alpha, beta in ((-45.0, -44.0), (44.0, 45.0)):
            with self.subTest(alpha=alpha, beta=beta):
                distribution = TruncatedGaussian.standard(alpha, beta)
                draws = sample(distribution, 4000, seed=5)
                self.assertTrue(np.all((draws > alpha) & (draws < beta)))
                self.assertGreater(np.ptp(draws), 0.0)
                stderr = float(draws.std(ddof=1)) / math.sqrt(draws.size)
                self.assertLess(abs(float(draws.mean()) - distribution.mean()), 5.0 * stderr)

    def test_exponential_samples_follow_the_truncated_law(self):
        distribution = TruncatedExponential(2.0, TruncationInterval(0.5, 2.0))
        draws = sample(distribution, 4000, seed=3)
        self.assertTrue(np.all((draws > 0.5) & (draws < 2.0)))
        law = stats.truncexpon(b=distribution.epsilon, loc=0.5, scale=0.5)
        self.assertGreater(stats.kstest(draws, law.cdf).pvalue, 1e-3)

    def test_seed_makes_draws_reproducible(self):
        distribution = TruncatedExponential.standard(0.0, 3.0)
        np.testing.assert_array_equal(sample(distribution, 10, seed=1), sample(distribution, 10, seed=1))
        self.assertFalse(np.array_equal(sample(distribution, 10, seed=1), sample(distribution, 10, seed=2)))

    def test_unknown_type_has_no_sampler(self):
        with self.assertRaises(DomainError):
            sample(object(), 10, seed=1)

    def test_monte_carlo_summary_agrees_with_closed_forms(self):
        distribution = TruncatedGaussian(1.0, 2.0, TruncationInterval(-1.0, 4.0))
        summary = monte_carlo_summary(distribution, 20000, seed=11)
        self.assertEqual(summary["theta"], 0.5)
        self.assertLess(abs(summary["sample_mean"] - summary["mean"]), 5.0 * summary["sample_mean_stderr"])
        self.assertLess(
            abs(summary["empirical_log_mgf"] - summary["log_mgf"]), 5.0 * summary["empirical_log_mgf_stderr"]
        )
        with self.assertRaises(DomainError):
            monte_carlo_summary(distribution, 1, seed=11)


class ReportTests(SimpleTestCase):
    def test_agreement_threshold_has_a_floor(self):
        self.assertEqual(agreement_threshold(1e-6), 1e-4)
        self.assertAlmostEqual(agreement_threshold(1e-3), 1e-2, delta=1e-15)

    def test_document_fields(self):
        distribution = TruncatedExponential.standard(1.0, 4.0)
        document = certify_document(distribution, 1e-6, 1001, 2, monte_carlo=500, seed=4)
        self.assertEqual(
            set(document), {"closed_form", "certified", "abs_diff", "theta_star", "evaluations", "monte_carlo"}
        )
        self.assertEqual(document["monte_carlo"]["n"], 500)
        self.assertTrue(is_verified(document, 1e-6))
        self.assertFalse(is_verified({**document, "abs_diff": 1e-3}, 1e-6))


class CertifyAPITests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()
        self.url = reverse("certifier:certify")

    def test_certifies_exponential_window(self):
        response = self.client.post(
            self.url, {"family": "exponential", "lambda": 1, "a": 1, "b": 4, "grid": 1001}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(response.data["verified"])
        self.assertAlmostEqual(response.data["certified"], 0.6571864, delta=1e-4)

    def test_field_errors(self):
        response = self.client.post(self.url, {"a": 0, "b": 1, "tol": -1}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("family", response.data)
        self.assertIn("tol", response.data)
        response = self.client.post(
            self.url, {"family": "gaussian", "mu": 0, "sigma": 1, "a": -1, "b": 2, "grid": 10}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("grid", response.data)

    def test_not_sub_gaussian_is_unprocessable(self):
        response = self.client.post(
            self.url, {"family": "exponential", "lambda": 1, "a": 0, "b": "+inf", "grid": 1001}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
