import io
import json
import os
import tempfile
from unittest import mock

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from common.exceptions import UsageError
from lemmas.batteries import LemmaOutcome

from .figures import FigureRequest, build_figure
from .management.commands.proxy import Command as ProxyCommand


def run(*args, **kwargs):
    out, err = io.StringIO(), io.StringIO()
    call_command(*args, stdout=out, stderr=err, **kwargs)
    return out.getvalue(), err.getvalue()


def read_csv(text):
    lines = text.strip().splitlines()
    return lines[0].split(","), np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",", ndmin=2)


class ProxyCommandTests(SimpleTestCase):
    def test_gaussian_document(self):
        out, _ = run("proxy", "gaussian", "--mu=0", "--sigma=1", "--a=-2", "--b=0.5")
        document = json.loads(out)
        self.assertEqual(document["family"], "gaussian")
        self.assertEqual(document["params"], {"mu": 0.0, "sigma": 1.0, "a": -2.0, "b": 0.5})
        self.assertEqual(document["case_tag"], "asymmetric-finite")
        self.assertAlmostEqual(document["variance_proxy"], 0.4057, delta=1e-4)

    def test_exponential_document(self):
        out, _ = run("proxy", "exponential", "--lambda=1", "--a=1", "--b=4")
        document = json.loads(out)
        self.assertAlmostEqual(document["variance_proxy"], 0.6571864, delta=1e-6)
        self.assertFalse(document["is_strict"])

    def test_infinite_endpoints(self):
        out, _ = run("proxy", "gaussian", "--mu=1", "--sigma=2", "--a=-inf", "--b=+inf")
        document = json.loads(out)
        self.assertEqual(document["params"]["a"], "-inf")
        self.assertEqual(document["variance_proxy"], 4.0)
        self.assertEqual(document["case_tag"], "untruncated")

    def test_verbose_progress_goes_to_stderr(self):
        out, err = run("proxy", "exponential", "--lambda=2", "--a=0", "--b=1", verbosity=2)
        self.assertIn("computing proxy", err)
        json.loads(out)

    def test_exit_codes(self):
        cases = (
            (("proxy", "gaussian", "--mu=0", "--sigma=abc", "--a=0", "--b=1"), 1),
            (("proxy", "gaussian", "--mu=0", "--a=0", "--b=1"), 1),
            (("proxy", "poisson", "--a=0", "--b=1"), 1),
            (("proxy", "gaussian", "--mu=0", "--sigma=-1", "--a=0", "--b=1"), 2),
            (("proxy", "gaussian", "--mu=0", "--sigma=1", "--a=2", "--b=1"), 2),
            (("proxy", "exponential", "--lambda=1", "--a=0", "--b=+inf"), 2),
        )
        for args, code in cases:
            with self.subTest(args=args), self.assertRaises(CommandError) as ctx:
                run(*args)
            self.assertEqual(ctx.exception.returncode, code)

    def test_command_line_exits_with_the_mapped_code(self):
        err = io.StringIO()
        command = ProxyCommand(stdout=io.StringIO(), stderr=err)
        argv = ["manage.py", "proxy", "gaussian", "--mu", "0", "--sigma", "-1", "--a", "-inf", "--b", "1"]
        with self.assertRaises(SystemExit) as ctx:
            command.run_from_argv(argv)
        self.assertEqual(ctx.exception.code, 2)
        self.assertIn("sigma", err.getvalue())

    def test_command_line_accepts_signed_values(self):
        out = io.StringIO()
        command = ProxyCommand(stdout=out, stderr=io.StringIO())
        command.run_from_argv(
            ["manage.py", "proxy", "gaussian", "--mu", "-0.5", "--sigma", "1", "--a", "-inf", "--b", "2"]
        )
        document = json.loads(out.getvalue())
        self.assertEqual(document["case_tag"], "semi-infinite")
        self.assertEqual(document["params"]["mu"], -0.5)


class CertifyCommandTests(SimpleTestCase):
    def test_agreement(self):
        out, _ = run("certify", "exponential", "--lambda=1", "--a=1", "--b=4", "--grid=1001")
        document = json.loads(out)
        self.assertLessEqual(document["abs_diff"], 1e-4)
        self.assertEqual(set(document), {"closed_form", "certified", "abs_diff", "theta_star", "evaluations"})

    @override_settings(SUBGAUSS_SEED=99)
    def test_monte_carlo_summary(self):
        out, _ = run("certify", "gaussian", "--mu=0", "--sigma=1", "--a=-2", "--b=0.5", "--grid=1001",
                     "--monte-carlo=1000")
        document = json.loads(out)
        self.assertEqual(document["monte_carlo"]["n"], 1000)
        self.assertEqual(document["monte_carlo"]["seed"], 99)

    def test_mismatch_exits_with_verification_code(self):
        # the tangency at theta = 2 lies outside a grid that stops at 0.5
        with self.assertRaises(CommandError) as ctx:
            out = io.StringIO()
            call_command(
                "certify", "exponential", "--lambda=1", "--a=1", "--b=4", "--grid=201", "--theta-max=0.5",
                stdout=out, stderr=io.StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, 3)
        document = json.loads(out.getvalue())
        self.assertLess(document["certified"], document["closed_form"] - 1e-4)

    def test_option_errors(self):
        for extra in ("--tol=0", "--tol=abc", "--grid=50", "--monte-carlo=1"):
            with self.subTest(extra=extra), self.assertRaises(CommandError) as ctx:
                run("certify", "exponential", "--lambda=1", "--a=1", "--b=4", extra)
            self.assertEqual(ctx.exception.returncode, 1)


class FigureCommandTests(SimpleTestCase):
    def test_figure_one_columns_and_symmetric_row(self):
        out, _ = run("figure", "1", "--grid=40")
        columns, data = read_csv(out)
        self.assertEqual(columns[:4], ["beta", "variance", "proxy", "x"])
        self.assertIn("density_beta_-0.5", columns)
        self.assertTrue(np.all(data[:, 2] >= data[:, 1] * (1.0 - 1e-12)))
        symmetric = data[np.argmin(np.abs(data[:, 0] - 2.0))]
        self.assertAlmostEqual(symmetric[2], symmetric[1], delta=1e-12)

    def test_figure_two_parabolas(self):
        table = build_figure(FigureRequest(2, grid_points=60))
        f, optimal = table.column("f"), table.column("p_optimal")
        self.assertTrue(np.all(optimal >= f - 1e-12))
        self.assertTrue(np.all(table.column("p_valid") >= f - 1e-12))
        self.assertTrue(np.any(table.column("p_invalid") < f))
        row = table.row_where("theta", 3.0)
        self.assertAlmostEqual(row["f"], row["p_optimal"], delta=1e-10)

    def test_figure_three_gap_is_positive(self):
        table = build_figure(FigureRequest(3, grid_points=30))
        self.assertTrue(np.all(table.column("proxy") > table.column("variance")))
        self.assertEqual(table.columns[-2:], ("density_beta_2", "density_beta_4"))

    def test_figure_four_levels(self):
        out, _ = run("figure", "4", "--grid=50")
        columns, data = read_csv(out)
        self.assertEqual(columns, ["theta", "g_at_0.8095", "g_at_0.8107", "g_at_0.812"])
        self.assertTrue(np.all(data[:, 3] <= 1e-12))
        at_two = data[np.argmin(np.abs(data[:, 0] - 2.0))]
        self.assertEqual(at_two[0], 2.0)
        self.assertGreater(at_two[1], 0.0)

    @override_settings(SUBGAUSS_FIGURE_POINTS=20)
    def test_sweep_size_comes_from_settings(self):
        out, _ = run("figure", "4")
        _, data = read_csv(out)
        # the marked thetas 0 and 2 are not on the 20-point sweep
        self.assertEqual(len(data), 22)

    def test_writes_to_a_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "figure3.csv")
            out, _ = run("figure", "3", "--grid=10", f"--out={path}")
            self.assertEqual(out, "")
            with open(path) as handle:
                self.assertTrue(handle.readline().startswith("beta,variance,proxy,t"))

    def test_errors(self):
        with tempfile.TemporaryDirectory() as directory:
            unwritable = os.path.join(directory, "missing", "figure.csv")
            for args in (("figure", "5"), ("figure", "4", "--grid=1"), ("figure", "4", f"--out={unwritable}")):
                with self.subTest(args=args), self.assertRaises(CommandError) as ctx:
                    run(*args)
                self.assertEqual(ctx.exception.returncode, 1)
        with self.assertRaises(UsageError):
            FigureRequest(7)


class LemmasCommandTests(SimpleTestCase):
    def test_appendix_suite(self):
        out, _ = run("lemmas", "--suite=appendix", "--grid=10")
        lines = out.strip().splitlines()
        self.assertEqual(lines[-1], "4/4 lemmas passed")
        self.assertTrue(all(line.startswith("PASS") for line in lines[:-1]))

    def test_failure_exits_with_verification_code(self):
        failing = [("appendix", LemmaOutcome("K positive", False, -1.0, 3, "worst at x = 1"))]
        out = io.StringIO()
        with mock.patch("cli.management.commands.lemmas.run_suite", return_value=failing):
            with self.assertRaises(CommandError) as ctx:
                call_command("lemmas", "--suite=appendix", stdout=out, stderr=io.StringIO())
        self.assertEqual(ctx.exception.returncode, 3)
        self.assertIn("FAIL", out.getvalue())
        self.assertIn("worst at x = 1", out.getvalue())
        self.assertIn("0/1 lemmas passed", out.getvalue())

    def test_bad_options(self):
        for args in (("lemmas", "--suite=poisson"), ("lemmas", "--grid=3")):
            with self.subTest(args=args), self.assertRaises(CommandError) as ctx:
                run(*args)
            self.assertEqual(ctx.exception.returncode, 1)
