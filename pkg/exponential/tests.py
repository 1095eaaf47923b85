import math

from django.test import SimpleTestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APIClient
from scipy import integrate

from common.distributions import ProxyCase, TruncationInterval
from common.exceptions import DomainError, NotSubGaussianError

from .distribution import (
    SERIES_SWITCH,
    TruncatedExponential,
    standard_gap,
    standard_mean,
    standard_proxy,
    standard_variance,
)
from .series import (
    SERIES_LIMIT,
    gap_kernel_scaled,
    gap_kernel_terms,
    third_cumulant_numerator_scaled,
    third_cumulant_numerator_terms,
)


def gap_kernel(x):
    return 2.0 * x * math.sinh(x) - 8.0 * math.cosh(x) + 2.0 * x * x + 8.0


class TruncatedExponentialTests(SimpleTestCase):
    def setUp(self):
        self.distribution = TruncatedExponential.standard(1.0, 4.0)

    def test_reference_values(self):
        result = self.distribution.variance_proxy()
        self.assertEqual(result.case_tag, ProxyCase.EXPONENTIAL_FINITE)
        self.assertFalse(result.is_strict)
        self.assertAlmostEqual(result.variance_proxy, 0.6571864, delta=1e-6)
        self.assertAlmostEqual(result.variance, 0.503731, delta=1e-5)
        self.assertAlmostEqual(self.distribution.strictness_gap(), 0.1534555, delta=1e-6)
        self.assertAlmostEqual(self.distribution.mean(), 1.8428129, delta=1e-6)

    def test_proxy_depends_only_on_the_width(self):
        shifted = TruncatedExponential.standard(7.5, 10.5)
        self.assertEqual(shifted.variance_proxy().variance_proxy, self.distribution.variance_proxy().variance_proxy)

    def test_centered_mgf_and_hoeffding_bound(self):
        mean = self.distribution.mean()
        for theta in (-1.5, 0.5, 2.0):
            with self.subTest(theta=theta):
                expected, _ = integrate.quad(
                    lambda t: self.distribution.density(t) * math.exp(theta * (t - mean)), 1.0, 4.0,
                    epsabs=1e-14, epsrel=1e-12,
                )
                self.assertAlmostEqual(self.distribution.centered_mgf(theta), expected, delta=1e-10 * expected)
        self.assertEqual(self.distribution.hoeffding_bound(), 2.25)
        self.assertLess(self.distribution.variance_proxy().variance_proxy, self.distribution.hoeffding_bound())

    def test_rate_scaling(self):
        scaled = TruncatedExponential(2.0, TruncationInterval(0.5, 2.0))
        self.assertAlmostEqual(scaled.alpha, 1.0)
        self.assertAlmostEqual(scaled.beta, 4.0)
        self.assertAlmostEqual(
            scaled.variance_proxy().variance_proxy, self.distribution.variance_proxy().variance_proxy / 4.0, delta=1e-15
        )
        self.assertAlmostEqual(scaled.mean(), self.distribution.mean() / 2.0, delta=1e-15)
        self.assertAlmostEqual(scaled.log_centered_mgf(1.0), self.distribution.log_centered_mgf(0.5), delta=1e-14)

    def test_wide_window_approaches_half_width(self):
        wide = TruncatedExponential.standard(0.0, 200.0)
        proxy = wide.variance_proxy().variance_proxy
        self.assertAlmostEqual(proxy, 99.0, delta=1e-12)
        self.assertAlmostEqual(proxy / 100.0, 0.99, delta=1e-14)
        self.assertAlmostEqual(wide.variance(), 1.0, delta=1e-12)

    def test_tangent_at_twice_the_rate(self):
        for epsilon in (0.3, 1.0, 3.0, 12.0):
            with self.subTest(epsilon=epsilon):
                distribution = TruncatedExponential.standard(0.5, 0.5 + epsilon)
                proxy = distribution.variance_proxy().variance_proxy
                self.assertAlmostEqual(distribution.log_centered_mgf(2.0), 2.0 * proxy, delta=1e-12 * (1.0 + proxy))

    def test_log_mgf_against_quadrature(self):
        mean = self.distribution.mean()
        self.assertAlmostEqual(self.distribution.log_centered_mgf(0.0), 0.0, delta=1e-15)
        # θ = 1 is the removable point of the closed form
        for theta in (-3.0, -0.5, 0.5, 1.0, 1.0 + 1e-9, 2.5, 6.0):
            with self.subTest(theta=theta):
                value, _ = integrate.quad(
                    lambda t: math.exp(theta * (t - mean)) * self.distribution.density(t), 1.0, 4.0,
                    epsabs=0.0, epsrel=1e-12,
                )
                self.assertAlmostEqual(self.distribution.log_centered_mgf(theta), math.log(value), delta=1e-10)

    def test_unbounded_upper_end_is_not_sub_gaussian(self):
        distribution = TruncatedExponential(1.0, TruncationInterval(2.0, "+inf"))
        self.assertAlmostEqual(distribution.mean(), 3.0)
        self.assertEqual(distribution.log_centered_mgf(1.0), math.inf)
        self.assertAlmostEqual(distribution.log_centered_mgf(0.5), -0.5 - math.log(0.5), delta=1e-15)
        for call in (distribution.variance_proxy, distribution.variance, distribution.strictness_gap):
            with self.assertRaises(NotSubGaussianError):
                call()

    def test_rejects_bad_parameters(self):
        with self.assertRaises(DomainError):
            TruncatedExponential(0.0, TruncationInterval(0.0, 1.0))
        with self.assertRaises(DomainError):
            TruncatedExponential(1.0, TruncationInterval(-1.0, 1.0))
        with self.assertRaises(DomainError):
            TruncatedExponential(1.0, TruncationInterval("-inf", 1.0))


class ClosedFormTests(SimpleTestCase):
    def test_gap_matches_proxy_minus_variance(self):
        for epsilon in (0.5, 1.0, 3.0, 7.0, 15.0, 30.0):
            with self.subTest(epsilon=epsilon):
                gap = standard_gap(epsilon)
                self.assertAlmostEqual(gap, standard_proxy(epsilon) - standard_variance(epsilon), delta=1e-12 * gap)

    def test_gap_identity_for_moderate_widths(self):
        for epsilon in (0.1, 0.12, 0.137, 0.2, 0.3, 0.4, 0.5):
            with self.subTest(epsilon=epsilon):
                gap = standard_gap(epsilon)
                proxy, variance = standard_proxy(epsilon), standard_variance(epsilon)
                self.assertAlmostEqual(proxy - variance, gap, delta=1e-12 * gap)
                half = 0.5 * epsilon
                self.assertAlmostEqual(proxy, half / math.tanh(half) - 1.0, delta=1e-12 * proxy)
                self.assertAlmostEqual(variance, 1.0 - (half / math.sinh(half)) ** 2, delta=1e-12 * variance)

    def test_gap_kernel_closed_form(self):
        self.assertAlmostEqual(gap_kernel(3.0), 5.56596, delta=1e-5)
        for epsilon in (0.5, 3.0, 10.0):
            with self.subTest(epsilon=epsilon):
                literal = math.exp(epsilon) * gap_kernel(epsilon) / (2.0 * math.expm1(epsilon) ** 2)
                self.assertAlmostEqual(standard_gap(epsilon), literal, delta=1e-12 * literal)

    def test_narrow_widths_follow_their_series(self):
        for epsilon in (1e-3, 1e-6):
            with self.subTest(epsilon=epsilon):
                leading = epsilon * epsilon / 12.0
                self.assertAlmostEqual(
                    standard_variance(epsilon), leading * (1.0 - epsilon * epsilon / 20.0), delta=1e-12 * leading
                )
                self.assertAlmostEqual(
                    standard_proxy(epsilon), leading * (1.0 - epsilon * epsilon / 60.0), delta=1e-12 * leading
                )

        self.assertGreater(standard_proxy(1e-3), standard_variance(1e-3))

    def test_gap_is_positive_for_tiny_widths(self):
        for epsilon in (1e-4, 1e-2, 0.05):
            with self.subTest(epsilon=epsilon):
                gap = standard_gap(epsilon)
                self.assertGreater(gap, 0.0)
                # gap = ε⁴/360 − ε⁶/7560 + O(ε⁸)
                expected = epsilon ** 4 / 360.0 - epsilon ** 6 / 7560.0
                self.assertAlmostEqual(gap, expected, delta=1e-6 * expected)

    def test_series_branches_are_continuous(self):
        below, above = SERIES_SWITCH * (1.0 - 1e-12), SERIES_SWITCH * (1.0 + 1e-12)
        self.assertAlmostEqual(standard_proxy(below), standard_proxy(above), delta=1e-15)
        self.assertAlmostEqual(standard_variance(below), standard_variance(above), delta=1e-15)
        self.assertAlmostEqual(standard_mean(0.0, below), standard_mean(0.0, above), delta=1e-15)

    def test_scaled_kernels_agree_at_the_switch(self):
        series = gap_kernel_scaled(SERIES_LIMIT)
        closed = math.fsum(gap_kernel_terms(SERIES_LIMIT))
        self.assertAlmostEqual(series, closed, delta=1e-12 * closed)
        series = third_cumulant_numerator_scaled(SERIES_LIMIT)
        closed = math.fsum(third_cumulant_numerator_terms(SERIES_LIMIT))
        self.assertAlmostEqual(series, closed, delta=1e-12 * closed)

    def test_third_cumulant_numerator_at_moderate_width(self):
        x = 5.0
        literal = 2.0 * math.exp(3 * x) - (x ** 3 + 6.0) * math.exp(2 * x) + (6.0 - x ** 3) * math.exp(x) - 2.0
        self.assertAlmostEqual(third_cumulant_numerator_scaled(x), literal * math.exp(-3 * x), delta=1e-10)


class ExponentialProxyAPITests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()
        self.url = reverse("exponential:exponential-proxy")

    def test_returns_proxy_document(self):
        response = self.client.post(self.url, {"lambda": 1, "a": 1, "b": 4}, format="json")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["family"], "exponential")
        self.assertEqual(response.data["case_tag"], "exponential-finite")
        self.assertAlmostEqual(response.data["variance_proxy"], 0.6571864, delta=1e-6)
        self.assertEqual(response.data["params"], {"lambda": 1.0, "a": 1.0, "b": 4.0})

    def test_infinite_upper_end_is_unprocessable(self):
        response = self.client.post(self.url, {"lambda": 1, "a": 0, "b": "+inf"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
        self.assertIn("not sub-Gaussian", response.data["detail"])

    def test_field_errors(self):
        response = self.client.post(self.url, {"a": 0, "b": "x"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(set(response.data), {"lambda", "b"})
