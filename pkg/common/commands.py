"""
Base class for the project's management commands.

Exit codes: 0 ok, 1 usage, 2 domain, 3 verification. Project errors are
mapped onto CommandError.returncode; argparse failures become usage errors
instead of argparse's own exit status 2.
"""
import json
import logging
import re
import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from .exceptions import BracketError, DomainError, EvaluationError, SubGaussianError, UsageError
from .params import FAMILY_FIELDS, build_distribution, validate_family_params

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_VERIFICATION = 3

# "--a -inf" would be read by argparse as a new option; the value is glued on instead.
_SIGNED_VALUE = re.compile(r"^-(inf|infinity|∞|\d|\.\d)", re.IGNORECASE)


def join_signed_values(argv):
    joined = []
    for token in argv:
        if joined and joined[-1].startswith("--") and "=" not in joined[-1] and _SIGNED_VALUE.match(token):
            joined[-1] = f"{joined[-1]}={token}"
        else:
            joined.append(token)
    return joined


def setting(name, default):
    return getattr(settings, name, default)


class SubGaussianCommand(BaseCommand):
    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # parse errors surface as CommandError(returncode=1) instead of argparse's exit 2
        parser.called_from_command_line = False
        return parser

    def run_from_argv(self, argv):
        argv = join_signed_values(argv)
        try:
            super().run_from_argv(argv)
        except CommandError as exc:
            self.stderr.write(f"error: {exc}")
            sys.exit(getattr(exc, "returncode", EXIT_USAGE) or EXIT_USAGE)

    def execute(self, *args, **options):
        self.verbosity = options.get("verbosity", 1)
        try:
            return super().execute(*args, **options)
        except UsageError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc
        except DomainError as exc:
            raise CommandError(str(exc), returncode=EXIT_DOMAIN) from exc
        except (EvaluationError, BracketError) as exc:
            raise CommandError(str(exc), returncode=EXIT_VERIFICATION) from exc
        except SubGaussianError as exc:
            raise CommandError(str(exc), returncode=EXIT_DOMAIN) from exc

    def progress(self, message, *args):
        logger.debug(message, *args)
        if self.verbosity >= 2:
            self.stderr.write(message % args if args else message)

    def write_json(self, document):
        self.stdout.write(json.dumps(document, indent=2))

    def add_family_arguments(self, parser):
        parser.add_argument("family", choices=sorted(FAMILY_FIELDS), help="Distribution family.")
        parser.add_argument("--mu", help="Gaussian location.")
        parser.add_argument("--sigma", help="Gaussian scale (> 0).")
        parser.add_argument("--lambda", dest="lambda", help="Exponential rate (> 0).")
        parser.add_argument("--a", help="Lower endpoint; accepts -inf.")
        parser.add_argument("--b", help="Upper endpoint; accepts +inf.")

    def distribution_from_options(self, options):
        family = options["family"]
        is_valid, result = validate_family_params(family, options)
        if not is_valid:
            message = "; ".join(error for errors in result.values() for error in errors)
            raise UsageError(f"{family}: {message}")
        return build_distribution(family, result)
