"""
Parameter parsing shared by the management commands and the API views.

Validators follow the `(is_valid, data_or_errors)` convention: field errors are
collected into a dict of lists so views can return them as a 400 body.
"""
import math

from exponential.distribution import TruncatedExponential
from gaussian.distribution import TruncatedGaussian

from .distributions import TruncationInterval
from .exceptions import SubGaussianError, UsageError
from .special_functions import ExtendedReal

FAMILY_FIELDS = {
    "gaussian": ("mu", "sigma", "a", "b"),
    "exponential": ("lambda", "a", "b"),
}
ENDPOINT_FIELDS = ("a", "b")


def parse_real(value, name):
    """A finite float; bools and blanks are rejected."""
    if value is None or isinstance(value, bool) or (isinstance(value, str) and not value.strip()):
        raise UsageError(f"{name}: a number is required")
    try:
        result = float(str(value).strip().replace("−", "-")) if isinstance(value, str) else float(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: cannot parse {value!r} as a number") from None
    if not math.isfinite(result):
        raise UsageError(f"{name}: must be finite, got {value!r}")
    return result


def parse_endpoint(value, name):
    if value is None or isinstance(value, bool):
        raise UsageError(f"{name}: a number, '-inf' or '+inf' is required")
    try:
        return ExtendedReal.parse(value)
    except SubGaussianError as exc:
        raise UsageError(f"{name}: {exc}") from None


def parse_positive_int(value, name, minimum=1):
    try:
        result = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: cannot parse {value!r} as an integer") from None
    if isinstance(value, bool) or result < minimum:
        raise UsageError(f"{name}: must be an integer >= {minimum}, got {value!r}")
    return result


def validate_family_params(family, data):
    """Validate family parameters. Returns (is_valid, params_or_errors)."""
    if family not in FAMILY_FIELDS:
        return False, {"family": [f"Expected one of {', '.join(FAMILY_FIELDS)}."]}
    errors = {}
    params = {}
    for name in FAMILY_FIELDS[family]:
        value = data.get(name)
        parse = parse_endpoint if name in ENDPOINT_FIELDS else parse_real
        try:
            params[name] = parse(value, name)
        except UsageError as exc:
            errors[name] = [str(exc)]
    if errors:
        return False, errors
    return True, params


def build_distribution(family, params):
    """Distribution object for validated params; DomainError propagates for out-of-domain values."""
    interval = TruncationInterval(params["a"], params["b"])
    if family == "gaussian":
        return TruncatedGaussian(params["mu"], params["sigma"], interval)
    if family == "exponential":
        return TruncatedExponential(params["lambda"], interval)
    raise UsageError(f"unknown family {family!r}")
