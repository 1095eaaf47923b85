from django.core.management.base import CommandError

from common.commands import EXIT_VERIFICATION, SubGaussianCommand
from common.params import parse_positive_int
from lemmas.batteries import DEFAULT_GRID, SUITES, run_suite


class Command(SubGaussianCommand):
    help = "Run the lemma batteries and print one pass/fail line per lemma with its worst margin."

    def add_arguments(self, parser):
        parser.add_argument("--suite", default="all", choices=(*SUITES, "all"))
        parser.add_argument("--grid", help=f"Points per grid (default {DEFAULT_GRID}).")

    def handle(self, *args, **options):
        grid = parse_positive_int(options["grid"], "grid", minimum=5) if options["grid"] is not None else DEFAULT_GRID
        results = run_suite(options["suite"], grid)
        failed = 0
        for suite, outcome in results:
            verdict = "PASS" if outcome.passed else "FAIL"
            line = f"{verdict}  {suite:<11} {outcome.name:<45} worst margin {outcome.worst_margin:.3e}  ({outcome.points} points)"
            if outcome.passed:
                self.stdout.write(line)
            else:
                failed += 1
                self.stdout.write(f"{line}  {outcome.detail}")
        self.stdout.write(f"{len(results) - failed}/{len(results)} lemmas passed")
        if failed:
            raise CommandError(f"{failed} lemma check(s) failed", returncode=EXIT_VERIFICATION)
