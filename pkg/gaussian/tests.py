import math

import numpy as np
from django.test import SimpleTestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APIClient
from scipy import integrate

from common.distributions import ProxyCase, TruncationInterval
from common.exceptions import DomainError
from common.tests import centred_window_integrals

from .distribution import TruncatedGaussian


class TruncatedGaussianTests(SimpleTestCase):
    def test_symmetric_window_has_proxy_equal_to_variance(self):
        distribution = TruncatedGaussian.standard(-2.0, 2.0)
        result = distribution.variance_proxy()
        self.assertEqual(result.case_tag, ProxyCase.SYMMETRIC_FINITE)
        self.assertTrue(result.is_strict)
        self.assertAlmostEqual(result.variance_proxy, 0.7737411, delta=1e-7)
        self.assertAlmostEqual(result.variance_proxy, result.variance, delta=1e-14)
        self.assertEqual(distribution.strictness_gap(), 0.0)

    def test_asymmetric_window(self):
        distribution = TruncatedGaussian.standard(-2.0, 0.5)
        result = distribution.variance_proxy()
        self.assertEqual(result.case_tag, ProxyCase.ASYMMETRIC_FINITE)
        self.assertFalse(result.is_strict)
        self.assertAlmostEqual(result.variance_proxy, 0.4057, delta=1e-4)
        self.assertGreater(distribution.strictness_gap(), 0.0)
        self.assertLess(result.variance_proxy, 1.0)

    def test_proxy_is_tangent_at_twice_the_window_centre(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            alpha = rng.uniform(-3.0, -0.5)
            beta = -alpha + rng.uniform(0.5, 3.0)
            with self.subTest(alpha=alpha, beta=beta):
                distribution = TruncatedGaussian.standard(alpha, beta)
                theta = alpha + beta
                proxy = distribution.variance_proxy().variance_proxy
                self.assertAlmostEqual(
                    distribution.log_centered_mgf(theta), 0.5 * proxy * theta * theta, delta=1e-12
                )

    def test_near_symmetric_window_is_continuous(self):
        symmetric = TruncatedGaussian.standard(-2.0, 2.0).variance_proxy().variance_proxy
        nudged = TruncatedGaussian.standard(-2.0, 2.0 + 1e-6).variance_proxy()
        self.assertEqual(nudged.case_tag, ProxyCase.ASYMMETRIC_FINITE)
        self.assertAlmostEqual(nudged.variance_proxy, symmetric, delta=1e-5)
        tiny = TruncatedGaussian.standard(-2.0, 2.0 + 1e-10).variance_proxy()
        self.assertEqual(tiny.case_tag, ProxyCase.SYMMETRIC_FINITE)

    def test_narrow_windows_away_from_zero(self):
        for alpha, beta in ((2.0, 2.001), (4.0, 4.0001), (8.0, 8.001), (30.0, 30.001)):
            with self.subTest(alpha=alpha, beta=beta):
                mass, pull, _ = centred_window_integrals(alpha, beta)
                expected = pull / (0.5 * (alpha + beta) * mass)
                result = TruncatedGaussian.standard(alpha, beta).variance_proxy()
                self.assertEqual(result.case_tag, ProxyCase.ASYMMETRIC_FINITE)
                self.assertAlmostEqual(result.variance_proxy, expected, delta=1e-9 * expected)
                self.assertGreater(result.variance_proxy, result.variance)
                width = beta - alpha
                self.assertAlmostEqual(result.variance, width * width / 12.0, delta=1e-3 * width * width / 12.0)

    def test_location_and_scale(self):
        standard = TruncatedGaussian.standard(-2.0, 0.5)
        scaled = TruncatedGaussian(3.0, 2.0, TruncationInterval(-1.0, 4.0))
        self.assertAlmostEqual(scaled.alpha, -2.0)
        self.assertAlmostEqual(scaled.beta, 0.5)
        self.assertAlmostEqual(
            scaled.variance_proxy().variance_proxy, 4.0 * standard.variance_proxy().variance_proxy, delta=1e-12
        )
        self.assertAlmostEqual(scaled.mean(), 3.0 + 2.0 * standard.mean(), delta=1e-12)
        self.assertAlmostEqual(scaled.log_centered_mgf(0.25), standard.log_centered_mgf(0.5), delta=1e-13)

    def test_unbounded_windows_have_unit_proxy(self):
        untruncated = TruncatedGaussian(1.0, 3.0, TruncationInterval("-inf", "+inf"))
        result = untruncated.variance_proxy()
        self.assertEqual(result.case_tag, ProxyCase.UNTRUNCATED)
        self.assertEqual(result.variance_proxy, 9.0)
        self.assertAlmostEqual(result.variance, 9.0, delta=1e-12)
        self.assertIsNone(untruncated.theta0)

        half_line = TruncatedGaussian(0.0, 1.0, TruncationInterval(0.0, "+inf"))
        result = half_line.variance_proxy()
        self.assertEqual(result.case_tag, ProxyCase.SEMI_INFINITE)
        self.assertEqual(result.variance_proxy, 1.0)
        self.assertAlmostEqual(result.variance, 1.0 - 2.0 / math.pi, delta=1e-14)
        self.assertFalse(result.is_strict)

    def test_proxy_between_variance_and_hoeffding(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            a = rng.uniform(-4.0, 2.0)
            b = a + rng.uniform(0.1, 6.0)
            with self.subTest(a=a, b=b):
                distribution = TruncatedGaussian.standard(a, b)
                result = distribution.variance_proxy()
                self.assertGreaterEqual(result.variance_proxy, result.variance * (1.0 - 1e-12))
                self.assertLessEqual(result.variance_proxy, min(1.0, distribution.hoeffding_bound()) + 1e-12)

    def test_log_mgf_against_quadrature(self):
        distribution = TruncatedGaussian(0.5, 1.5, TruncationInterval(-1.0, 2.0))
        mean = distribution.mean()
        self.assertEqual(distribution.log_centered_mgf(0.0), 0.0)
        for theta in (-2.0, -0.3, 0.7, 3.0):
            with self.subTest(theta=theta):
                value, _ = integrate.quad(
                    lambda x: math.exp(theta * (x - mean)) * distribution.density(x), -1.0, 2.0,
                    epsabs=0.0, epsrel=1e-12,
                )
                self.assertAlmostEqual(distribution.log_centered_mgf(theta), math.log(value), delta=1e-10)

    def test_log_mgf_in_far_tails_stays_finite(self):
        distribution = TruncatedGaussian.standard(-1.0, 3.0)
        for theta in (-80.0, 80.0):
            with self.subTest(theta=theta):
                value = distribution.log_centered_mgf(theta)
                self.assertTrue(math.isfinite(value))
                self.assertLess(value, 0.5 * distribution.variance_proxy().variance_proxy * theta * theta)

    def test_density_integrates_to_one(self):
        distribution = TruncatedGaussian(0.0, 1.0, TruncationInterval(-0.5, "+inf"))
        total, _ = integrate.quad(distribution.density, -0.5, math.inf)
        self.assertAlmostEqual(total, 1.0, delta=1e-9)
        self.assertEqual(distribution.density(-0.6), 0.0)

    def test_rejects_bad_parameters(self):
        with self.assertRaises(DomainError):
            TruncatedGaussian(0.0, 0.0, TruncationInterval(-1.0, 1.0))
        with self.assertRaises(DomainError):
            TruncatedGaussian(math.inf, 1.0, TruncationInterval(-1.0, 1.0))
        with self.assertRaises(DomainError):
            TruncatedGaussian(0.0, 1.0, (1.0, -1.0))


class GaussianProxyAPITests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()
        self.url = reverse("gaussian:gaussian-proxy")

    def test_returns_proxy_document(self):
        response = self.client.post(self.url, {"mu": 0, "sigma": 1, "a": -2, "b": 0.5}, format="json")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["family"], "gaussian")
        self.assertEqual(response.data["case_tag"], "asymmetric-finite")
        self.assertFalse(response.data["is_strict"])
        self.assertAlmostEqual(response.data["variance_proxy"], 0.4057, delta=1e-4)

    def test_accepts_infinite_endpoints(self):
        response = self.client.post(self.url, {"mu": 0, "sigma": 2, "a": "-inf", "b": "+inf"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["params"]["a"], "-inf")
        self.assertEqual(response.data["variance_proxy"], 4.0)
        self.assertTrue(response.data["is_strict"])

    def test_field_errors(self):
        response = self.client.post(self.url, {"mu": "zero", "a": 0, "b": 1}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn("mu", response.data)
        self.assertIn("sigma", response.data)

    def test_domain_errors(self):
        response = self.client.post(self.url, {"mu": 0, "sigma": -1, "a": 0, "b": 1}, format="json")
        self.assertEqual(response.status_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
        self.assertIn("sigma", response.data["detail"])
        response = self.client.post(self.url, {"mu": 0, "sigma": 1, "a": 2, "b": 1}, format="json")
        self.assertEqual(response.status_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
