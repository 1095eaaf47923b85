from django.core.management.base import CommandError

from certifier.reports import agreement_threshold, certify_document, is_verified
from common.commands import EXIT_VERIFICATION, SubGaussianCommand, setting
from common.exceptions import UsageError
from common.params import parse_positive_int, parse_real


class Command(SubGaussianCommand):
    help = (
        "Certify the closed-form proxy against the MGF-domination bisection oracle. "
        "Exits 3 when they disagree by more than max(1e-4, 10*tol)."
    )

    def add_arguments(self, parser):
        self.add_family_arguments(parser)
        parser.add_argument("--tol", help="Bisection tolerance on s^2 (default SUBGAUSS_CERTIFY_TOL).")
        parser.add_argument("--grid", help="Coarse theta-grid size (default SUBGAUSS_GRID_POINTS, >= 101).")
        parser.add_argument("--theta-max", dest="theta_max", help="Symmetric grid extent; default is the family window.")
        parser.add_argument("--monte-carlo", dest="monte_carlo", help="Append a Monte-Carlo summary from N draws.")

    def handle(self, *args, **options):
        distribution = self.distribution_from_options(options)
        tol = parse_real(options["tol"], "tol") if options["tol"] is not None else setting("SUBGAUSS_CERTIFY_TOL", 1e-6)
        if not tol > 0.0:
            raise UsageError(f"tol must be positive, got {tol!r}")
        grid = (
            parse_positive_int(options["grid"], "grid", minimum=101)
            if options["grid"] is not None
            else setting("SUBGAUSS_GRID_POINTS", 4001)
        )
        theta_max = parse_real(options["theta_max"], "theta-max") if options["theta_max"] is not None else None
        monte_carlo = (
            parse_positive_int(options["monte_carlo"], "monte-carlo", minimum=2)
            if options["monte_carlo"] is not None
            else None
        )
        self.progress("certifying %s %s (tol=%g, grid=%d)", distribution.family, distribution.params(), tol, grid)
        document = certify_document(
            distribution,
            tol=tol,
            n_points=grid,
            refinement_rounds=setting("SUBGAUSS_REFINEMENT_ROUNDS", 2),
            theta_max=theta_max,
            monte_carlo=monte_carlo,
            seed=setting("SUBGAUSS_SEED", 20240601),
        )
        self.write_json(document)
        if not is_verified(document, tol):
            raise CommandError(
                f"certified {document['certified']!r} differs from closed form {document['closed_form']!r} "
                f"by {document['abs_diff']:.3g} > {agreement_threshold(tol):.3g}",
                returncode=EXIT_VERIFICATION,
            )
