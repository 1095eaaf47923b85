from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi

from common.exceptions import DomainError
from common.params import build_distribution, validate_family_params


def _validate_gaussian_params(data):
    """Validate POST data in view. Returns (is_valid, data_or_errors)."""
    return validate_family_params("gaussian", data)


_ENDPOINT_SCHEMA = openapi.Schema(
    type=openapi.TYPE_STRING,
    description='Number, or "-inf" / "+inf"',
)

_GAUSSIAN_BODY_SCHEMA = openapi.Schema(
    type=openapi.TYPE_OBJECT,
    required=["mu", "sigma", "a", "b"],
    properties={
        "mu": openapi.Schema(type=openapi.TYPE_NUMBER, description="Location of the parent normal"),
        "sigma": openapi.Schema(type=openapi.TYPE_NUMBER, description="Scale of the parent normal (> 0)"),
        "a": _ENDPOINT_SCHEMA,
        "b": _ENDPOINT_SCHEMA,
    },
)


class GaussianProxyAPIView(APIView):
    """
    POST: Optimal variance proxy of N(mu, sigma^2) truncated to (a, b).
    """

    @swagger_auto_schema(
        tags=["Gaussian"],
        operation_summary="Optimal variance proxy of a truncated Gaussian",
        request_body=_GAUSSIAN_BODY_SCHEMA,
        responses={
            200: openapi.Response(description="family, params, mean, variance, variance_proxy, is_strict, case_tag"),
            400: openapi.Response(description="Field errors"),
            422: openapi.Response(description="Parameters outside the domain"),
        },
    )
    def post(self, request):
        is_valid, result = _validate_gaussian_params(request.data)
        if not is_valid:
            return Response(result, status=status.HTTP_400_BAD_REQUEST)
        try:
            distribution = build_distribution("gaussian", result)
            payload = distribution.as_dict()
        except DomainError as exc:
            return Response({"detail": str(exc)}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
        return Response(payload)
