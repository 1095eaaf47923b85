from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi

from common.exceptions import UsageError
from common.params import parse_positive_int

from .batteries import DEFAULT_GRID, SUITES, run_suite


def _validate_lemma_query(params):
    """Validate query params. Returns (is_valid, data_or_errors)."""
    errors = {}
    suite = (params.get("suite") or "all").strip()
    if suite not in (*SUITES, "all"):
        errors["suite"] = [f"Expected one of {', '.join((*SUITES, 'all'))}."]
    grid = DEFAULT_GRID
    if params.get("grid"):
        try:
            grid = parse_positive_int(params.get("grid"), "grid", minimum=5)
        except UsageError as exc:
            errors["grid"] = [str(exc)]
    if errors:
        return False, errors
    return True, {"suite": suite, "grid": grid}


class LemmaSuiteAPIView(APIView):
    """
    GET: Run a lemma battery and report every check with its worst margin.
    """

    @swagger_auto_schema(
        tags=["Lemmas"],
        operation_summary="Run lemma batteries",
        manual_parameters=[
            openapi.Parameter("suite", openapi.IN_QUERY, type=openapi.TYPE_STRING, enum=[*SUITES, "all"], default="all"),
            openapi.Parameter("grid", openapi.IN_QUERY, type=openapi.TYPE_INTEGER, default=DEFAULT_GRID),
        ],
        responses={200: openapi.Response(description="suite, passed, results"), 400: openapi.Response(description="Bad query")},
    )
    def get(self, request):
        is_valid, result = _validate_lemma_query(request.query_params)
        if not is_valid:
            return Response(result, status=status.HTTP_400_BAD_REQUEST)
        outcomes = run_suite(result["suite"], result["grid"])
        payload = {
            "suite": result["suite"],
            "passed": all(outcome.passed for _, outcome in outcomes),
            "results": [{"suite": suite, **outcome.as_dict()} for suite, outcome in outcomes],
        }
        return Response(payload)
