"""
Cancellation-free evaluation of the functions behind the exponential gap.

The positivity functions all have nonnegative Taylor coefficients at 0, so for
moderate arguments they are summed term by term (exact rational coefficients,
log-scaled powers); for large arguments the closed form divided by its dominant
exponential is used instead.
"""
import math
from fractions import Fraction
from functools import lru_cache

# Largest power kept in the Taylor tables; enough for e^{5x} at x = 20.
MAX_POWER = 400
# Above this argument the scaled closed form replaces the series.
SERIES_LIMIT = 20.0
# Below this argument sinh x − x is summed term by term.
SINH_EXCESS_LIMIT = 1.0


def log_coefficient_table(coefficient, powers):
    """[(k, sign, ln|c_k|)] for the nonzero exact coefficients c_k."""
    table = []
    for k in powers:
        value = coefficient(k)
        if value == 0:
            continue
        magnitude = abs(value)
        log_c = math.log(magnitude.numerator) - math.log(magnitude.denominator)
        table.append((k, 1 if value > 0 else -1, log_c))
    return tuple(table)


def sum_series(table, x, log_scale=0.0):
    """Σ c_k x^k · e^{-log_scale} for x > 0."""
    log_x = math.log(x)
    total = 0.0
    peak = 0.0
    for k, sign, log_c in table:
        term = math.exp(log_c + k * log_x - log_scale)
        total += sign * term
        peak = max(peak, term)
        if term < 1e-18 * peak and k > 4.0 * x + 10:
            break
    return total


@lru_cache(maxsize=None)
def gap_kernel_table():
    return log_coefficient_table(
        lambda k: Fraction(2 * k - 8, math.factorial(k)) if k >= 6 else Fraction(0),
        range(0, MAX_POWER + 1, 2),
    )


@lru_cache(maxsize=None)
def third_cumulant_numerator_table():
    def coefficient(k):
        if k < 3:
            return Fraction(0)
        return Fraction(2 * 3 ** k - 6 * 2 ** k + 6, math.factorial(k)) - Fraction(
            2 ** (k - 3) + 1, math.factorial(k - 3)
        )

    return log_coefficient_table(coefficient, range(0, MAX_POWER + 1))


def gap_kernel_terms(x):
    """Closed-form terms of K(x)·e^{-x}, K(x) = 2x sinh x − 8 cosh x + 2x² + 8."""
    e1, e2 = math.exp(-x), math.exp(-2.0 * x)
    return (x, -x * e2, -4.0, -4.0 * e2, (2.0 * x * x + 8.0) * e1)


def gap_kernel_scaled(x):
    """K(x)·e^{-x}."""
    if x <= SERIES_LIMIT:
        return sum_series(gap_kernel_table(), x, log_scale=x)
    return math.fsum(gap_kernel_terms(x))


def third_cumulant_numerator_terms(x):
    """Closed-form terms of P(x)·e^{-3x}, P(x) = 2e^{3x} − (x³+6)e^{2x} + (6−x³)e^{x} − 2."""
    e1, e2, e3 = math.exp(-x), math.exp(-2.0 * x), math.exp(-3.0 * x)
    cube = x ** 3
    return (2.0, -cube * e1, -6.0 * e1, 6.0 * e2, -cube * e2, -2.0 * e3)


def third_cumulant_numerator_scaled(x):
    """P(x)·e^{-3x}."""
    if x <= SERIES_LIMIT:
        return sum_series(third_cumulant_numerator_table(), x, log_scale=3.0 * x)
    return math.fsum(third_cumulant_numerator_terms(x))


@lru_cache(maxsize=None)
def sinh_excess_table():
    return log_coefficient_table(
        lambda k: Fraction(1, math.factorial(k)) if k >= 3 else Fraction(0),
        range(1, 61, 2),
    )


def sinh_excess(x):
    """sinh x − x for x ≥ 0, summed from its positive series below SINH_EXCESS_LIMIT."""
    if x == 0.0:
        return 0.0
    if x < SINH_EXCESS_LIMIT:
        return sum_series(sinh_excess_table(), x)
    return math.sinh(x) - x
