import logging

from cli.figures import FigureRequest, write_figure
from common.commands import SubGaussianCommand, setting
from common.exceptions import UsageError
from common.params import parse_positive_int

logger = logging.getLogger(__name__)


class Command(SubGaussianCommand):
    help = "Write the data behind figure 1, 2, 3 or 4 as CSV (stdout unless --out is given)."

    def add_arguments(self, parser):
        parser.add_argument("figure_id", type=int, choices=(1, 2, 3, 4), help="Figure number.")
        parser.add_argument("--out", dest="output_path", help="CSV destination path.")
        parser.add_argument("--grid", help="Sweep size (default SUBGAUSS_FIGURE_POINTS).")

    def handle(self, *args, **options):
        points = (
            parse_positive_int(options["grid"], "grid", minimum=2)
            if options["grid"] is not None
            else setting("SUBGAUSS_FIGURE_POINTS", 400)
        )
        request = FigureRequest(options["figure_id"], options["output_path"], points)
        if request.output_path is None:
            write_figure(request, self.stdout)
            return
        try:
            with open(request.output_path, "w", newline="") as handle:
                write_figure(request, handle)
        except OSError as exc:
            raise UsageError(f"cannot write {request.output_path}: {exc.strerror or exc}") from exc
        logger.info("figure %d written to %s", request.figure_id, request.output_path)
        self.progress("wrote %s", request.output_path)
