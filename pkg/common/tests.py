import math

import numpy as np
from django.test import SimpleTestCase
from scipy import integrate

from .commands import join_signed_values
from .distributions import ProxyCase, ProxyResult, TruncationInterval
from .exceptions import DomainError, UsageError
from .params import build_distribution, parse_endpoint, validate_family_params
from .special_functions import (
    NEG_INF,
    POS_INF,
    ExtendedReal,
    expm1_ratio,
    gauss_F_derivatives,
    gauss_F_ratios,
    log_expm1_ratio,
    log_std_normal_cdf_diff,
    std_normal_cdf,
    std_normal_cdf_diff,
    std_normal_pdf,
    std_normal_quantile,
    truncated_normal_centre_offset,
    truncated_normal_moments,
)


def centred_window_integrals(lo, hi):
    """(mass, pull, spread) of e^{−x²/2} on (lo, hi), folded about the centre c.

    mass = ∫ cosh(cu)e^{−u²/2}, pull = ∫ u·sinh(cu)e^{−u²/2} and
    spread = ∫ u²·cosh(cu)e^{−u²/2}, over 0 < u < (hi − lo)/2.
    """
    centre, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    quad = dict(epsabs=0.0, epsrel=1e-13)
    mass, _ = integrate.quad(lambda u: math.cosh(centre * u) * math.exp(-0.5 * u * u), 0.0, half, **quad)
    pull, _ = integrate.quad(lambda u: u * math.sinh(centre * u) * math.exp(-0.5 * u * u), 0.0, half, **quad)
    spread, _ = integrate.quad(lambda u: u * u * math.cosh(centre * u) * math.exp(-0.5 * u * u), 0.0, half, **quad)
    return mass, pull, spread


class ExtendedRealTests(SimpleTestCase):
    def test_parses_infinities_and_numbers(self):
        self.assertEqual(ExtendedReal.parse("-inf"), NEG_INF)
        self.assertEqual(ExtendedReal.parse("+inf"), POS_INF)
        self.assertEqual(ExtendedReal.parse("inf"), POS_INF)
        self.assertEqual(float(ExtendedReal.parse("1.5")), 1.5)
        self.assertEqual(float(ExtendedReal.parse(2)), 2.0)

    def test_rejects_nan_and_garbage(self):
        with self.assertRaises(DomainError):
            ExtendedReal(math.nan)
        with self.assertRaises(DomainError):
            ExtendedReal.parse("nan")
        with self.assertRaises(UsageError):
            ExtendedReal.parse("one")

    def test_json_form_of_infinite_endpoints(self):
        self.assertEqual(NEG_INF.to_json(), "-inf")
        self.assertEqual(POS_INF.to_json(), "+inf")
        self.assertEqual(ExtendedReal(0.25).to_json(), 0.25)

    def test_ordering(self):
        self.assertLess(NEG_INF, ExtendedReal(-1e300))
        self.assertLess(ExtendedReal(1e300), POS_INF)


class NormalFunctionTests(SimpleTestCase):
    def test_pdf_values(self):
        self.assertEqual(std_normal_pdf(0.0), 0.3989422804014327)
        self.assertAlmostEqual(std_normal_pdf(2.0), 0.05399096651318806, delta=1e-16)
        for x in (0.3, 1.7, 5.0, 11.0):
            self.assertEqual(std_normal_pdf(x), std_normal_pdf(-x))

    def test_cdf_values(self):
        self.assertEqual(std_normal_cdf(0.0), 0.5)
        self.assertEqual(std_normal_cdf(POS_INF), 1.0)
        self.assertEqual(std_normal_cdf(NEG_INF), 0.0)
        self.assertAlmostEqual(std_normal_cdf(2.0), 0.9772498680518208, delta=1e-15)

    def test_cdf_symmetry_on_grid(self):
        for x in np.linspace(-12.0, 12.0, 97):
            with self.subTest(x=x):
                self.assertAlmostEqual(std_normal_cdf(x) + std_normal_cdf(-x), 1.0, delta=2e-15)

    def test_cdf_diff_values(self):
        self.assertEqual(std_normal_cdf_diff(NEG_INF, POS_INF), 1.0)
        self.assertAlmostEqual(std_normal_cdf_diff(-1.0, 1.0), 0.6826894921370859, delta=1e-15)
        # quadrature of the density scaled by e^{50} keeps the integrand O(1)
        scaled, _ = integrate.quad(lambda x: math.exp(50.0 - 0.5 * x * x) / math.sqrt(2.0 * math.pi), 10.0, 11.0,
                                   epsabs=0.0, epsrel=1e-13)
        tail = std_normal_cdf_diff(10.0, 11.0)
        self.assertGreater(tail, 0.0)
        self.assertAlmostEqual(tail * math.exp(50.0) / scaled, 1.0, delta=1e-10)
        self.assertAlmostEqual(std_normal_cdf_diff(-11.0, -10.0), tail, delta=1e-10 * tail)

    def test_cdf_diff_rejects_empty_interval(self):
        with self.assertRaises(DomainError):
            std_normal_cdf_diff(1.0, 1.0)
        with self.assertRaises(DomainError):
            std_normal_cdf_diff(2.0, -2.0)

    def test_log_cdf_diff_beyond_underflow(self):
        value = log_std_normal_cdf_diff(40.0, POS_INF)
        # ln Q(x) ≈ −x²/2 − ln(x√(2π)) − 1/x²
        expected = -800.0 - math.log(40.0 * math.sqrt(2.0 * math.pi)) - 1.0 / 1600.0
        self.assertAlmostEqual(value, expected, delta=1e-5)

    def test_quantile(self):
        self.assertAlmostEqual(std_normal_quantile(0.5), 0.0, delta=1e-15)
        self.assertAlmostEqual(std_normal_quantile(0.9772498680518208), 2.0, delta=1e-9)
        for p in (1e-4, 0.01, 0.3):
            with self.subTest(p=p):
                self.assertAlmostEqual(std_normal_quantile(p), -std_normal_quantile(1.0 - p), delta=1e-8)
        for p in (0.0, 1.0, -0.1):
            with self.assertRaises(DomainError):
                std_normal_quantile(p)

    def test_truncated_moments_against_quadrature(self):
        for lo, hi in ((-2.0, 0.5), (-1.0, 4.0), (0.5, 3.0)):
            with self.subTest(lo=lo, hi=hi):
                mass = std_normal_cdf_diff(lo, hi)
                quad = dict(epsabs=1e-14, epsrel=1e-13)
                mean, _ = integrate.quad(lambda x: x * std_normal_pdf(x) / mass, lo, hi, **quad)
                second, _ = integrate.quad(lambda x: (x - mean) ** 2 * std_normal_pdf(x) / mass, lo, hi, **quad)
                got_mean, got_var = truncated_normal_moments(lo, hi)
                self.assertAlmostEqual(got_mean, mean, delta=1e-12)
                self.assertAlmostEqual(got_var, second, delta=1e-12)

    def test_narrow_windows_away_from_zero(self):
        for lo, hi in ((2.0, 2.001), (4.0, 4.0001), (8.0, 8.001), (30.0, 30.001), (-30.001, -30.0)):
            with self.subTest(lo=lo, hi=hi):
                mass, pull, spread = centred_window_integrals(lo, hi)
                centre = 0.5 * (lo + hi)
                offset = -pull / mass
                variance = spread / mass - offset * offset
                got_offset = truncated_normal_centre_offset(lo, hi)
                got_mean, got_var = truncated_normal_moments(lo, hi)
                self.assertAlmostEqual(got_offset, offset, delta=1e-10 * abs(offset))
                self.assertAlmostEqual(got_mean, centre + offset, delta=1e-13 * abs(centre))
                self.assertAlmostEqual(got_var, variance, delta=1e-10 * variance)
                self.assertLess(got_var, (hi - lo) ** 2 / 12.0)

    def test_centre_offset_needs_a_bounded_window(self):
        with self.assertRaises(DomainError):
            truncated_normal_centre_offset(-math.inf, 1.0)


class FDerivativeTests(SimpleTestCase):
    def test_values_at_zero(self):
        for beta in (0.5, 1.0, 2.5):
            with self.subTest(beta=beta):
                F, d1, d2, _ = gauss_F_derivatives(beta, 0.0)
                self.assertAlmostEqual(F, 2.0 * std_normal_cdf(beta) - 1.0, delta=2e-15)
                self.assertEqual(d1, 0.0)
                expected = -(2.0 * beta / math.sqrt(2.0 * math.pi)) * math.exp(-0.5 * beta * beta)
                self.assertAlmostEqual(d2, expected, delta=1e-15)

    def test_third_derivative_recurrence(self):
        beta, theta = 1.7, 0.9
        _, d1, d2, d3 = gauss_F_derivatives(beta, theta)
        p2 = theta * theta + 1.0 - beta * beta
        self.assertAlmostEqual(d3 + 2.0 * theta * d2 + p2 * d1, 0.0, delta=1e-15)

    def test_derivatives_match_finite_differences(self):
        beta, theta, step = 1.3, 0.6, 1e-5
        values = gauss_F_derivatives(beta, theta)
        plus, minus = gauss_F_derivatives(beta, theta + step), gauss_F_derivatives(beta, theta - step)
        for order in range(3):
            with self.subTest(order=order):
                slope = (plus[order] - minus[order]) / (2.0 * step)
                self.assertAlmostEqual(slope, values[order + 1], delta=1e-8)

    def test_ratios_agree_with_plain_values_and_survive_far_tails(self):
        F, d1, d2, d3 = gauss_F_derivatives(2.0, 1.5)
        r1, r2, r3 = gauss_F_ratios(2.0, 1.5)
        self.assertAlmostEqual(r1, d1 / F, delta=1e-13)
        self.assertAlmostEqual(r2, d2 / F, delta=1e-13)
        self.assertAlmostEqual(r3, d3 / F, delta=1e-13)
        far = gauss_F_ratios(1.0, 60.0)
        self.assertTrue(all(math.isfinite(r) for r in far))
        # F′/F is the mean of N(0, 1) on (−β−θ, β−θ), which sits at the upper end
        self.assertAlmostEqual(far[0], -(60.0 - 1.0), delta=0.05)

    def test_window_validation(self):
        with self.assertRaises(DomainError):
            gauss_F_derivatives(0.0, 1.0)
        with self.assertRaises(DomainError):
            gauss_F_derivatives(1.0, math.inf)


class Expm1HelperTests(SimpleTestCase):
    def test_removable_point(self):
        self.assertEqual(expm1_ratio(0.0), 1.0)
        self.assertEqual(log_expm1_ratio(0.0), 0.0)
        self.assertAlmostEqual(expm1_ratio(1e-9), 1.0 + 5e-10, delta=1e-15)

    def test_large_arguments_do_not_overflow(self):
        self.assertAlmostEqual(log_expm1_ratio(800.0), 800.0 - math.log(800.0), delta=1e-10)
        self.assertAlmostEqual(log_expm1_ratio(-800.0), -math.log(800.0), delta=1e-12)


class ValueTypeTests(SimpleTestCase):
    def test_interval_coerces_and_validates(self):
        interval = TruncationInterval("-inf", 3)
        self.assertTrue(interval.lower.is_neg_inf)
        self.assertFalse(interval.is_bounded)
        self.assertEqual(interval.hoeffding_bound(), math.inf)
        self.assertEqual(TruncationInterval(1, 4).hoeffding_bound(), 2.25)
        with self.assertRaises(DomainError):
            TruncationInterval(2, 2)

    def test_proxy_result_rejects_proxy_below_variance(self):
        with self.assertRaises(DomainError):
            ProxyResult(variance_proxy=0.5, variance=0.6, case_tag=ProxyCase.ASYMMETRIC_FINITE)
        result = ProxyResult(0.7, 0.5, ProxyCase.EXPONENTIAL_FINITE)
        self.assertFalse(result.is_strict)
        self.assertAlmostEqual(result.gap, 0.2)

    def test_strict_cases(self):
        self.assertTrue(ProxyCase.SYMMETRIC_FINITE.is_strict)
        self.assertTrue(ProxyCase.UNTRUNCATED.is_strict)
        self.assertFalse(ProxyCase.SEMI_INFINITE.is_strict)


class ParamTests(SimpleTestCase):
    def test_validates_gaussian_fields(self):
        is_valid, params = validate_family_params("gaussian", {"mu": "0", "sigma": 1, "a": "-inf", "b": "2"})
        self.assertTrue(is_valid)
        self.assertTrue(params["a"].is_neg_inf)
        self.assertEqual(params["sigma"], 1.0)

    def test_collects_field_errors(self):
        is_valid, errors = validate_family_params("gaussian", {"mu": "x", "a": "0", "b": "1"})
        self.assertFalse(is_valid)
        self.assertEqual(set(errors), {"mu", "sigma"})
        is_valid, errors = validate_family_params("poisson", {})
        self.assertFalse(is_valid)
        self.assertIn("family", errors)

    def test_endpoint_parsing(self):
        self.assertTrue(parse_endpoint("+inf", "b").is_pos_inf)
        with self.assertRaises(UsageError):
            parse_endpoint(None, "a")
        with self.assertRaises(UsageError):
            parse_endpoint("nan", "a")

    def test_build_distribution_surfaces_domain_errors(self):
        with self.assertRaises(DomainError):
            build_distribution("gaussian", {"mu": 0.0, "sigma": -1.0, "a": ExtendedReal(0), "b": ExtendedReal(1)})
        with self.assertRaises(DomainError):
            build_distribution("exponential", {"lambda": 1.0, "a": ExtendedReal(-1), "b": ExtendedReal(1)})


class SignedValueTests(SimpleTestCase):
    def test_glues_negative_values_onto_options(self):
        argv = ["manage.py", "proxy", "gaussian", "--a", "-inf", "--b", "+inf", "--mu", "-0.5"]
        self.assertEqual(
            join_signed_values(argv),
            ["manage.py", "proxy", "gaussian", "--a=-inf", "--b", "+inf", "--mu=-0.5"],
        )

    def test_leaves_flags_alone(self):
        argv = ["manage.py", "lemmas", "--suite", "appendix", "-v", "2"]
        self.assertEqual(join_signed_values(argv), argv)
