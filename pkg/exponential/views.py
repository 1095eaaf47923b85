from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi

from common.exceptions import DomainError
from common.params import build_distribution, validate_family_params


def _validate_exponential_params(data):
    """Validate POST data in view. Returns (is_valid, data_or_errors)."""
    return validate_family_params("exponential", data)


_EXPONENTIAL_BODY_SCHEMA = openapi.Schema(
    type=openapi.TYPE_OBJECT,
    required=["lambda", "a", "b"],
    properties={
        "lambda": openapi.Schema(type=openapi.TYPE_NUMBER, description="Rate of the parent exponential (> 0)"),
        "a": openapi.Schema(type=openapi.TYPE_STRING, description="Lower endpoint, finite and >= 0"),
        "b": openapi.Schema(type=openapi.TYPE_STRING, description='Upper endpoint; "+inf" is rejected with 422'),
    },
)


class ExponentialProxyAPIView(APIView):
    """
    POST: Optimal variance proxy of Exp(lambda) truncated to (a, b).
    An infinite upper endpoint is not sub-Gaussian and answers 422.
    """

    @swagger_auto_schema(
        tags=["Exponential"],
        operation_summary="Optimal variance proxy of a truncated exponential",
        request_body=_EXPONENTIAL_BODY_SCHEMA,
        responses={
            200: openapi.Response(description="family, params, mean, variance, variance_proxy, is_strict, case_tag"),
            400: openapi.Response(description="Field errors"),
            422: openapi.Response(description="Parameters outside the domain, or not sub-Gaussian"),
        },
    )
    def post(self, request):
        is_valid, result = _validate_exponential_params(request.data)
        if not is_valid:
            return Response(result, status=status.HTTP_400_BAD_REQUEST)
        try:
            distribution = build_distribution("exponential", result)
            payload = distribution.as_dict()
        except DomainError as exc:
            return Response({"detail": str(exc)}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
        return Response(payload)
