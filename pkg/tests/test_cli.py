"""
Tests for the command-line front end.

Version: 0.1.0
Last Updated: 2026-10-17
Status: Active

================================================================================
FUNCTIONS UNDER TEST:
================================================================================
- main: every subcommand, exit status and error object
- --format text, --out, --plot, --workers; per-command options

================================================================================
TEST DATA SOURCES:
================================================================================
- JSON graphs and divisors in tests/fixtures
- Expected documents computed by hand (circle gram (3), K4 Z/4 x Z/4)
================================================================================
"""

import contextlib
import io
import json
import tempfile
import unittest
from pathlib import Path

from tropical_jacobians.cli import EXIT_DOMAIN, EXIT_OK, EXIT_PARSE, main

from tests.utilities import get_fixture_path


def run(*argv: str) -> tuple[int, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue()


def fixture(name: str) -> str:
    return str(get_fixture_path(name))


@contextlib.contextmanager
def json_file(document: object):
    """Write `document` to a temporary JSON file and yield its path."""
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "input.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        yield str(path)


class TestDocuments(unittest.TestCase):
    """Successful commands print one compact JSON line."""

    def test_byte_exact_outputs(self):
        cases = [
            (("jacobian", "--graph", fixture("circle.json")), '{"gram":[["3"]]}'),
            (("jacobian", "--graph", fixture("theta.json")), '{"gram":[["3","1"],["1","4"]]}'),
            (("jacobian", "--graph", fixture("segment.json")), '{"gram":[]}'),
            (("discrete-jac", "--graph", fixture("k4.json")), '{"factors":[4,4],"order":16}'),
            (("discrete-jac", "--graph", fixture("banana3.json")), '{"factors":[3],"order":3}'),
            (("trees", "--graph", fixture("k4.json")), '{"spanning_trees":16}'),
            (
                ("is-principal", "--graph", fixture("segment.json"),
                 "--divisor", fixture("divisor_segment_endpoints.json")),
                '{"principal":true}',
            ),
            (
                ("is-principal", "--graph", fixture("theta.json"),
                 "--divisor", fixture("divisor_theta_vertices.json")),
                '{"principal":false}',
            ),
            (
                ("is-principal", "--graph", fixture("circle.json"),
                 "--divisor", fixture("divisor_circle_interior.json")),
                '{"principal":false}',
            ),
            (
                ("is-principal", "--graph", fixture("segment.json"),
                 "--divisor", fixture("divisor_degree_one.json")),
                '{"principal":false}',
            ),
            (
                ("abel-jacobi", "--graph", fixture("circle.json"), "--point", "e1:1"),
                '{"coords":["1"],"basis":"bfs-v1"}',
            ),
        ]
        for argv, expected in cases:
            with self.subTest(argv=argv):
                code, out = run(*argv)
                self.assertEqual(code, EXIT_OK)
                self.assertEqual(out, expected + "\n")

    def test_divisor_file_in_documented_shape(self):
        divisor = [{"at": {"vertex": "v1"}, "mult": 1}, {"at": {"vertex": "v2"}, "mult": -1}]
        with json_file(divisor) as path:
            code, out = run("is-principal", "--graph", fixture("segment.json"), "--divisor", path)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, '{"principal":true}\n')
        interior = [
            {"at": {"edge": "e1", "offset": "1/2"}, "mult": 2},
            {"at": {"vertex": "v1"}, "mult": -1},
            {"at": {"vertex": "v2"}, "mult": -1},
        ]
        with json_file(interior) as path:
            code, out = run("lift-function", "--graph", fixture("segment.json"), "--divisor", path)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["vertex_values"], {"v1": "0", "v2": "1"})

    def test_lift_function(self):
        code, out = run("lift-function", "--graph", fixture("segment.json"),
                        "--divisor", fixture("divisor_segment_interior.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out), {
            "vertex_values": {"v1": "0", "v2": "1"},
            "edges": {"e1": [["0", "0"], ["1/2", "-1/2"], ["2", "1"]]},
        })

    def test_check_balance(self):
        code, out = run("check-balance", "--graph", fixture("theta.json"))
        self.assertEqual(code, EXIT_OK)
        doc = json.loads(out)
        self.assertTrue(doc["balanced"])
        self.assertGreater(doc["rays"], 0)

    def test_embed_is_independent_of_workers(self):
        _, single = run("embed", "--graph", fixture("k4.json"))
        _, threaded = run("embed", "--graph", fixture("k4.json"), "--workers", "4")
        self.assertEqual(single, threaded)
        self.assertEqual(sorted(json.loads(single)), ["rays", "segments", "subdivision"])


class TestErrors(unittest.TestCase):
    """Domain errors exit 1, malformed input and bad arguments exit 2."""

    def assert_error(self, argv, code, kind):
        got, out = run(*argv)
        self.assertEqual(got, code)
        self.assertEqual(json.loads(out)["error"]["kind"], kind)

    def test_domain_errors(self):
        self.assert_error(
            ("lift-function", "--graph", fixture("circle.json"), "--divisor", fixture("divisor_circle_interior.json")),
            EXIT_DOMAIN, "NotPrincipal",
        )
        self.assert_error(
            ("lift-function", "--graph", fixture("segment.json"), "--divisor", fixture("divisor_degree_one.json")),
            EXIT_DOMAIN, "NotPrincipal",
        )
        self.assert_error(("trees", "--graph", fixture("disconnected.json")), EXIT_DOMAIN, "DisconnectedGraph")
        self.assert_error(("discrete-jac", "--graph", fixture("theta.json")), EXIT_DOMAIN, "NonUnitLengths")

    def test_malformed_input(self):
        self.assert_error(("jacobian", "--graph", fixture("malformed_graph.json")), EXIT_PARSE, "MalformedInput")
        self.assert_error(("jacobian", "--graph", fixture("missing.json")), EXIT_PARSE, "MalformedInput")
        self.assert_error(("abel-jacobi", "--graph", fixture("circle.json")), EXIT_PARSE, "MalformedInput")
        self.assert_error(("is-principal", "--graph", fixture("circle.json")), EXIT_PARSE, "MalformedInput")
        self.assert_error(
            ("abel-jacobi", "--graph", fixture("circle.json"), "--point", "e1:7"), EXIT_PARSE, "MalformedInput"
        )
        for graph in ({"vertices": 5, "edges": []}, {"vertices": ["v1"], "edges": "e1"},
                      {"vertices": [{"id": "v1"}], "edges": []}, [1, 2]):
            with self.subTest(graph=graph), json_file(graph) as path:
                self.assert_error(("jacobian", "--graph", path), EXIT_PARSE, "MalformedInput")
        with json_file([{"point": {"vertex": "v1"}, "mult": 1}]) as path:
            self.assert_error(
                ("is-principal", "--graph", fixture("segment.json"), "--divisor", path),
                EXIT_PARSE, "MalformedInput",
            )

    def test_bad_arguments(self):
        self.assertEqual(run("jacobian", "--graph", fixture("circle.json"), "--bogus")[0], EXIT_PARSE)
        self.assertEqual(run("frobnicate")[0], EXIT_PARSE)
        self.assertEqual(run("jacobian")[0], EXIT_PARSE)

    def test_flags_belong_to_their_command(self):
        misuse = [
            ("jacobian", "--graph", fixture("circle.json"), "--plot"),
            ("jacobian", "--graph", fixture("circle.json"), "--divisor", fixture("divisor_degree_one.json")),
            ("trees", "--graph", fixture("k4.json"), "--workers", "2"),
            ("is-principal", "--graph", fixture("segment.json"), "--point", "v1",
             "--divisor", fixture("divisor_degree_one.json")),
            ("abel-jacobi", "--graph", fixture("circle.json"), "--point", "v1", "--perturb"),
            ("check-balance", "--graph", fixture("theta.json"), "--plot"),
        ]
        for argv in misuse:
            with self.subTest(argv=argv):
                self.assertEqual(run(*argv)[0], EXIT_PARSE)


class TestOutputOptions(unittest.TestCase):
    """Text tables, output files and the plot CSV."""

    def test_text_format(self):
        code, out = run("trees", "--graph", fixture("k4.json"), "--format", "text")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.split(), ["spanning_trees", "16"])
        _, out = run("discrete-jac", "--graph", fixture("k4.json"), "--format", "text")
        self.assertIn("Z/4 x Z/4", out)
        _, out = run("abel-jacobi", "--graph", fixture("circle.json"), "--point", "e1:1", "--format", "text")
        self.assertEqual(out.splitlines()[0], "v1 -> e1:1, basis bfs-v1")
        self.assertEqual(out.split()[-2:], ["c1", "1"])

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "gram.json"
            code, out = run("jacobian", "--graph", fixture("circle.json"), "--out", str(target))
            self.assertEqual(code, EXIT_OK)
            self.assertEqual(out, "")
            self.assertEqual(target.read_text(encoding="utf-8"), '{"gram":[["3"]]}\n')

    def test_plot_csv(self):
        code, out = run("embed", "--graph", fixture("segment.json"), "--plot")
        self.assertEqual(code, EXIT_OK)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "segment,x,y,z")
        self.assertEqual(len(lines), 9)
        self.assertEqual(lines[1], "0,0,0,1")


if __name__ == '__main__':
    unittest.main()
