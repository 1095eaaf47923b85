"""
The four one-variable positivity functions used by the proofs:

    K(x)  = 2x sinh x − 8 cosh x + 2x² + 8
    P(x)  = 2e^{3x} − (x³ + 6)e^{2x} + (6 − x³)e^{x} − 2
    R(x)  = 20x sinh x cosh² x − 21 cosh³ x − 18x² cosh x + 19x sinh x + 21 cosh x
    B0(x) = sinh 5x − 5 sinh 3x + 10 sinh x + 4x³ cosh x − 4x³ cosh 3x

Each is evaluated divided by its dominant exponential e^{kx}: from the Taylor
series up to x = 20, from the closed form beyond.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from common.exceptions import DomainError, UsageError
from exponential.series import (
    MAX_POWER,
    SERIES_LIMIT,
    gap_kernel_table,
    gap_kernel_terms,
    log_coefficient_table,
    sum_series,
    third_cumulant_numerator_table,
    third_cumulant_numerator_terms,
)


@lru_cache(maxsize=None)
def _r_table():
    def coefficient(k):
        n = k // 2
        numerator = (
            10 * n * Fraction(3) ** (2 * n - 1)
            + 48 * n
            - Fraction(21, 4) * (9 ** n - 1)
            - 36 * n * (2 * n - 1)
        )
        return numerator / math.factorial(k)

    return log_coefficient_table(coefficient, range(2, MAX_POWER + 1, 2))


@lru_cache(maxsize=None)
def _b0_table():
    def coefficient(k):
        falling = k * (k - 1) * (k - 2)
        numerator = 5 ** k - 5 * 3 ** k + 10 + 4 * falling * (1 - Fraction(3) ** (k - 3))
        return numerator / math.factorial(k)

    return log_coefficient_table(coefficient, range(1, MAX_POWER + 1, 2))


def _r_terms(x):
    e2, e4, e6 = math.exp(-2.0 * x), math.exp(-4.0 * x), math.exp(-6.0 * x)
    return (
        2.5 * x,
        -2.5 * x * e6,
        12.0 * x * e2,
        -12.0 * x * e4,
        -21.0 / 8.0,
        -21.0 / 8.0 * e6,
        21.0 / 8.0 * e2,
        21.0 / 8.0 * e4,
        -9.0 * x * x * e2,
        -9.0 * x * x * e4,
    )


def _b0_terms(x):
    e2, e4, e6, e8, e10 = (math.exp(-k * x) for k in (2.0, 4.0, 6.0, 8.0, 10.0))
    cube = x ** 3
    return (
        0.5,
        -0.5 * e10,
        -2.5 * e2,
        2.5 * e8,
        5.0 * e4,
        -5.0 * e6,
        2.0 * cube * e4,
        2.0 * cube * e6,
        -2.0 * cube * e2,
        -2.0 * cube * e8,
    )


@dataclass(frozen=True)
class PositivityFunction:
    name: str
    growth: float
    table: object
    terms: object

    def scaled(self, x):
        """Value divided by e^{growth·x}."""
        if x <= SERIES_LIMIT:
            return sum_series(self.table(), x, log_scale=self.growth * x)
        return math.fsum(self.terms(x))

    def magnitude_scaled(self, x):
        """Σ|closed-form terms|, divided by e^{growth·x}; the scale for sign margins."""
        return math.fsum(abs(term) for term in self.terms(x))

    def value(self, x):
        if x <= SERIES_LIMIT:
            return sum_series(self.table(), x)
        return self.scaled(x) * math.exp(self.growth * x)


POSITIVITY_FUNCTIONS = {
    "K": PositivityFunction("K", 1.0, gap_kernel_table, gap_kernel_terms),
    "P": PositivityFunction("P", 3.0, third_cumulant_numerator_table, third_cumulant_numerator_terms),
    "R": PositivityFunction("R", 3.0, _r_table, _r_terms),
    "B0": PositivityFunction("B0", 5.0, _b0_table, _b0_terms),
}


def positivity_function(name):
    try:
        return POSITIVITY_FUNCTIONS[name]
    except KeyError:
        known = ", ".join(POSITIVITY_FUNCTIONS)
        raise UsageError(f"unknown positivity function {name!r}; expected one of {known}") from None


def _positive_argument(x):
    x = float(x)
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"argument must be positive and finite, got {x}")
    return x


def appendix_positivity(name, x):
    return positivity_function(name).value(_positive_argument(x))


def appendix_positivity_scaled(name, x):
    return positivity_function(name).scaled(_positive_argument(x))
