from django.conf import settings
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi

from common.exceptions import SubGaussianError, UsageError
from common.params import build_distribution, parse_positive_int, parse_real, validate_family_params

from .reports import certify_document, is_verified


def _validate_certify_request(data):
    """Validate POST data in view. Returns (is_valid, data_or_errors)."""
    family = (data.get("family") or "").strip() if isinstance(data.get("family"), str) else data.get("family")
    is_valid, result = validate_family_params(family, data)
    errors = {} if is_valid else dict(result)
    options = {
        "tol": getattr(settings, "SUBGAUSS_CERTIFY_TOL", 1e-6),
        "grid": getattr(settings, "SUBGAUSS_GRID_POINTS", 4001),
        "theta_max": None,
        "monte_carlo": None,
    }
    parsers = {
        "tol": lambda value: parse_real(value, "tol"),
        "grid": lambda value: parse_positive_int(value, "grid", minimum=101),
        "theta_max": lambda value: parse_real(value, "theta_max"),
        "monte_carlo": lambda value: parse_positive_int(value, "monte_carlo", minimum=2),
    }
    for name, parse in parsers.items():
        if data.get(name) in (None, ""):
            continue
        try:
            options[name] = parse(data.get(name))
        except UsageError as exc:
            errors[name] = [str(exc)]
    if not options["tol"] > 0.0:
        errors["tol"] = ["tol must be positive."]
    if errors:
        return False, errors
    return True, {"family": family, "params": result, **options}


_CERTIFY_BODY_SCHEMA = openapi.Schema(
    type=openapi.TYPE_OBJECT,
    required=["family", "a", "b"],
    properties={
        "family": openapi.Schema(type=openapi.TYPE_STRING, enum=["gaussian", "exponential"]),
        "mu": openapi.Schema(type=openapi.TYPE_NUMBER, description="Gaussian only"),
        "sigma": openapi.Schema(type=openapi.TYPE_NUMBER, description="Gaussian only"),
        "lambda": openapi.Schema(type=openapi.TYPE_NUMBER, description="Exponential only"),
        "a": openapi.Schema(type=openapi.TYPE_STRING, description='Number, or "-inf"'),
        "b": openapi.Schema(type=openapi.TYPE_STRING, description='Number, or "+inf"'),
        "tol": openapi.Schema(type=openapi.TYPE_NUMBER, default=1e-6),
        "grid": openapi.Schema(type=openapi.TYPE_INTEGER, default=4001),
        "theta_max": openapi.Schema(type=openapi.TYPE_NUMBER, description="Symmetric grid extent"),
        "monte_carlo": openapi.Schema(type=openapi.TYPE_INTEGER, description="Sample size of the Monte-Carlo summary"),
    },
)


class CertifyAPIView(APIView):
    """
    POST: Certify the closed-form proxy with the bisection oracle.
    A mismatch is reported with "verified": false, not as an error.
    """

    @swagger_auto_schema(
        tags=["Certifier"],
        operation_summary="Certify a closed-form variance proxy",
        request_body=_CERTIFY_BODY_SCHEMA,
        responses={
            200: openapi.Response(description="closed_form, certified, abs_diff, theta_star, evaluations, verified"),
            400: openapi.Response(description="Field errors"),
            422: openapi.Response(description="Parameters outside the domain, or the oracle could not run"),
        },
    )
    def post(self, request):
        is_valid, result = _validate_certify_request(request.data)
        if not is_valid:
            return Response(result, status=status.HTTP_400_BAD_REQUEST)
        data = result
        try:
            distribution = build_distribution(data["family"], data["params"])
            document = certify_document(
                distribution,
                tol=data["tol"],
                n_points=data["grid"],
                refinement_rounds=getattr(settings, "SUBGAUSS_REFINEMENT_ROUNDS", 2),
                theta_max=data["theta_max"],
                monte_carlo=data["monte_carlo"],
                seed=getattr(settings, "SUBGAUSS_SEED", 20240601),
            )
        except SubGaussianError as exc:
            return Response({"detail": str(exc)}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
        document["verified"] = is_verified(document, data["tol"])
        return Response(document)
