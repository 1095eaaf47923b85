import math

from django.test import SimpleTestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APIClient

from common.exceptions import DomainError, UsageError
from exponential.distribution import TruncatedExponential, standard_proxy

from .appendix import POSITIVITY_FUNCTIONS, appendix_positivity, appendix_positivity_scaled
from .batteries import BATTERIES, LemmaOutcome, _guarded, run_suite, suite_names
from .exponential import (
    ExpFrame,
    exp_bounds,
    exp_discriminant,
    exp_g,
    exp_G,
    exp_G_prime,
    exp_g3_at_zero,
    exp_h,
    exp_h_third,
)
from .gaussian import (
    GaussFrame,
    gauss_f,
    gauss_h,
    gauss_h_prime,
    gauss_h_second,
    gauss_parabola,
    gauss_parabola_slope,
    gauss_S,
    gauss_S_prefactor,
    gauss_S_tilde,
    gauss_w_c,
    gauss_Z,
)


def third_difference(function, x, step):
    return (function(x + 2 * step) - 2 * function(x + step) + 2 * function(x - step) - function(x - 2 * step)) / (
        2 * step ** 3
    )


class GaussFrameTests(SimpleTestCase):
    def test_symmetric_parabola_coefficient(self):
        frame = GaussFrame(-2.0, 2.0)
        self.assertTrue(frame.is_symmetric)
        self.assertAlmostEqual(gauss_w_c(frame), -0.113129, delta=1e-6)
        proxy = frame.distribution().variance_proxy().variance_proxy
        self.assertAlmostEqual(1.0 + 2.0 * gauss_w_c(frame), proxy, delta=1e-14)

    def test_parabola_touches_f_at_twice_the_centre(self):
        frame = GaussFrame(-2.0, 0.5)
        theta = frame.alpha + frame.beta
        self.assertAlmostEqual(gauss_f(frame, theta), gauss_parabola(frame, theta), delta=1e-12)
        self.assertAlmostEqual(gauss_h(frame, theta), gauss_parabola_slope(frame, theta), delta=1e-12)
        self.assertEqual(gauss_f(frame, 0.0), 0.0)
        self.assertAlmostEqual(gauss_h(frame, 0.0), frame.c, delta=1e-15)

    def test_h_derivatives_match_finite_differences(self):
        frame = GaussFrame(-1.0, 2.5)
        for theta in (-1.2, 0.3, 0.75, 2.0):
            with self.subTest(theta=theta):
                step = 1e-5
                slope = (gauss_h(frame, theta + step) - gauss_h(frame, theta - step)) / (2 * step)
                self.assertAlmostEqual(gauss_h_prime(frame, theta), slope, delta=1e-8)
                step = 1e-4
                curvature = (gauss_h_prime(frame, theta + step) - gauss_h_prime(frame, theta - step)) / (2 * step)
                self.assertAlmostEqual(gauss_h_second(frame, theta), curvature, delta=1e-6)

    def test_h_is_concave_right_of_the_centre(self):
        frame = GaussFrame(-1.0, 2.5)
        self.assertLess(gauss_h_second(frame, frame.theta0 + 0.5), 0.0)
        self.assertGreater(gauss_h_second(frame, frame.theta0 - 0.5), 0.0)
        self.assertLess(gauss_Z(1.5, 0.5), 0.0)

    def test_hyperbolic_form_of_S(self):
        for beta, theta in ((1.0, 1.0), (2.0, 0.5), (0.8, 1.5)):
            with self.subTest(beta=beta, theta=theta):
                value = gauss_S(beta, theta)
                self.assertGreater(value, 0.0)
                hyperbolic = gauss_S_prefactor(beta, theta) * gauss_S_tilde(beta, theta)
                self.assertAlmostEqual(hyperbolic, value, delta=1e-8 * value)
        with self.assertRaises(DomainError):
            gauss_S(1.0, 0.0)

    def test_frame_validation(self):
        with self.assertRaises(DomainError):
            GaussFrame(1.0, 1.0)
        with self.assertRaises(DomainError):
            GaussFrame(-math.inf, 1.0)


class ExpFrameTests(SimpleTestCase):
    def setUp(self):
        self.frame = ExpFrame(1.0, 4.0, 0.81)

    def test_g_vanishes_at_zero_and_matches_G(self):
        self.assertAlmostEqual(exp_g(self.frame, 0.0), 0.0, delta=1e-15)
        spread = math.exp(4.0) - math.exp(1.0)
        for theta in (-1.0, 0.5, 1.0, 2.5):
            with self.subTest(theta=theta):
                expected = spread * math.exp(-0.5 * 0.81 ** 2 * theta * theta) * exp_g(self.frame, theta)
                self.assertAlmostEqual(exp_G(self.frame, theta), expected, delta=1e-9 * spread)

    def test_G_prime_matches_finite_difference(self):
        spread = math.exp(4.0) - math.exp(1.0)
        step = 1e-6
        for theta in (-0.7, 0.4, 2.5):
            with self.subTest(theta=theta):
                slope = (exp_G(self.frame, theta + step) - exp_G(self.frame, theta - step)) / (2 * step)
                self.assertAlmostEqual(exp_G_prime(self.frame, theta), slope, delta=1e-7 * spread)
        with self.assertRaises(DomainError):
            exp_G_prime(self.frame, 1.0)

    def test_h_third_matches_finite_difference(self):
        value = exp_h_third(self.frame, 0.5)
        self.assertAlmostEqual(value, -1.173, delta=1e-3)
        estimate = third_difference(lambda t: exp_h(self.frame, t), 0.5, 5e-4)
        self.assertAlmostEqual(estimate, value, delta=1e-4 * abs(value))

    def test_bounds_bracket_the_proxy(self):
        bounds = exp_bounds(self.frame)
        s_c = math.sqrt(standard_proxy(3.0))
        self.assertLess(bounds.s_inf, s_c)
        self.assertLessEqual(s_c, bounds.s_1)
        self.assertLess(bounds.s_1, bounds.s_2)
        a, b, c = self.frame.with_s(bounds.s_1).coefficients
        self.assertAlmostEqual(exp_discriminant(self.frame.with_s(bounds.s_1)) / (b * b + 4 * abs(a * c)), 0.0,
                               delta=1e-8)

    def test_third_cumulant_at_zero(self):
        self.assertAlmostEqual(exp_g3_at_zero(1.0, 3.0), 0.3552, delta=1e-4)
        distribution = TruncatedExponential.standard(1.0, 4.0)
        estimate = third_difference(distribution.log_centered_mgf, 0.0, 1e-2)
        self.assertAlmostEqual(exp_g3_at_zero(1.0, 3.0), estimate, delta=1e-4)

    def test_third_cumulant_series_for_narrow_windows(self):
        eps = 0.3
        series = eps ** 4 / 120 - eps ** 6 / 1512 + eps ** 8 / 28800 - eps ** 10 / 665280
        self.assertAlmostEqual(exp_g3_at_zero(0.0, eps), series, delta=1e-9 * series)

    def test_frame_validation(self):
        for args in ((-0.5, 1.0, 1.0), (1.0, 1.0, 1.0), (0.0, math.inf, 1.0), (0.0, 1.0, 0.0)):
            with self.subTest(args=args), self.assertRaises(DomainError):
                ExpFrame(*args)
        with self.assertRaises(DomainError):
            exp_g3_at_zero(0.0, 0.0)


class AppendixTests(SimpleTestCase):
    def test_gap_kernel_value(self):
        self.assertAlmostEqual(appendix_positivity("K", 3.0), 5.56596, delta=1e-5)
        self.assertAlmostEqual(
            appendix_positivity_scaled("K", 3.0), appendix_positivity("K", 3.0) * math.exp(-3.0), delta=1e-14
        )

    def test_functions_are_positive_across_scales(self):
        for name in POSITIVITY_FUNCTIONS:
            for x in (0.05, 0.5, 4.0, 19.9, 20.1, 150.0):
                with self.subTest(name=name, x=x):
                    self.assertGreater(appendix_positivity_scaled(name, x), 0.0)

    def test_errors(self):
        with self.assertRaises(UsageError):
            appendix_positivity("Q", 1.0)
        for x in (0.0, -1.0, math.inf):
            with self.subTest(x=x), self.assertRaises(DomainError):
                appendix_positivity("K", x)


class BatteryTests(SimpleTestCase):
    def test_every_suite_passes(self):
        for suite in BATTERIES:
            with self.subTest(suite=suite):
                outcomes = run_suite(suite, grid=30)
                self.assertEqual(len(outcomes), len(BATTERIES[suite]))
                for name, outcome in outcomes:
                    self.assertEqual(name, suite)
                    self.assertTrue(outcome.passed, outcome)
                    self.assertGreater(outcome.points, 0)

    def test_appendix_outcome_names(self):
        names = [outcome.name for _, outcome in run_suite("appendix", grid=10)]
        self.assertEqual(names, ["K positive", "P positive", "R positive", "B0 positive"])

    def test_suite_selection(self):
        self.assertEqual(suite_names("all"), ("gaussian", "exponential", "appendix"))
        with self.assertRaises(UsageError):
            suite_names("poisson")
        with self.assertRaises(UsageError):
            run_suite("appendix", grid=4)

    def test_errors_become_failed_outcomes(self):
        def _check_broken_lemma(grid):
            raise DomainError("boom")

        outcome = _guarded(_check_broken_lemma)(10)
        self.assertEqual(outcome.name, "broken lemma")
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.detail, "boom")
        self.assertIsNone(outcome.as_dict()["worst_margin"])

    def test_outcome_document(self):
        outcome = LemmaOutcome("x", True, 0.5, 3, "worst at y")
        self.assertEqual(
            outcome.as_dict(), {"name": "x", "passed": True, "worst_margin": 0.5, "points": 3, "detail": "worst at y"}
        )


class LemmaSuiteAPITests(SimpleTestCase):
    def setUp(self):
        self.client = APIClient()
        self.url = reverse("lemmas:lemma-suite")

    def test_runs_a_suite(self):
        response = self.client.get(self.url, {"suite": "appendix", "grid": 10})
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(response.data["passed"])
        self.assertEqual(response.data["suite"], "appendix")
        self.assertEqual(len(response.data["results"]), 4)
        self.assertEqual(response.data["results"][0]["suite"], "appendix")

    def test_query_errors(self):
        response = self.client.get(self.url, {"suite": "poisson", "grid": 2})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(set(response.data), {"suite", "grid"})
