"""End-to-end runs of the command line through main(argv)."""
import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest.mock import patch

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
import monodromy

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = monodromy.main(list(argv))
    return code, out.getvalue(), err.getvalue()


def fixture(name):
    return os.path.join(FIXTURES, name)


class TestNr(unittest.TestCase):
    def test_text(self):
        code, out, _ = run("nr", "4", "--format", "text")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "N(4) = {1, 2, 3, 4, 5, 8, 9, 16}")
        self.assertEqual(lines[1], "N'(4) = {1, 2, 3, 4, 8, 9, 16}")
        self.assertEqual(lines[2], "N(4) \\ N'(4) = {5}")

    def test_json(self):
        code, out, _ = run("nr", "2")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out), {"r": 2, "N": [1, 2, 3, 4], "N_prime": [1, 2, 3, 4], "difference": []})

    def test_bad_r(self):
        code, _, err = run("nr", "0")
        self.assertEqual(code, 2)
        self.assertIn("error:", err)

    def test_usage_errors(self):
        self.assertEqual(run("nr")[0], 2)
        self.assertEqual(run("frobnicate")[0], 2)


class TestBounds(unittest.TestCase):
    def test_membership(self):
        code, out, _ = run("bounds", "--ell", "3", "--s", "1", "--r", "2", "--n", "3")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertTrue(data["member"])
        self.assertEqual(data["threshold"], 2)

    def test_threshold(self):
        code, out, _ = run("bounds", "--ell", "2", "--s", "1", "--m", "3")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["threshold"], 3)

    def test_scan(self):
        code, out, _ = run("bounds", "--r", "2", "--n", "4")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["first_witness"], [2, 1])
        self.assertTrue(data["in_N"])
        code, out, _ = run("bounds", "--r", "2", "--n", "5")
        self.assertIsNone(json.loads(out)["first_witness"])

    def test_incomplete_flags(self):
        self.assertEqual(run("bounds", "--ell", "3")[0], 2)


class TestClassify(unittest.TestCase):
    def verdict(self, *argv):
        code, out, err = run("classify", *argv)
        self.assertEqual(code, 0, err)
        return json.loads(out)["verdict"]

    def test_fixtures(self):
        self.assertEqual(self.verdict(fixture("semistable_d2.json"), "--k", "1", "--r", "2", "--n", "7"),
                         "SemistablePattern")
        self.assertEqual(self.verdict(fixture("example62_ell3.json"), "--k", "1", "--r", "3", "--n", "3"),
                         "Indeterminate")
        self.assertEqual(self.verdict(fixture("example62_ell3.json"), "--k", "1", "--r", "3", "--n", "7"),
                         "NotSemistablePattern")

    def test_payload_shape(self):
        code, out, _ = run("classify", fixture("semistable_d2.json"), "--k", "1", "--r", "2", "--n", "7")
        data = json.loads(out)
        self.assertEqual(sorted(data), ["caveats", "evidence", "input", "params", "reason", "theorem", "verdict"])
        self.assertEqual(data["params"], {"k": 1, "r": 2, "n": 7})
        self.assertEqual(data["input"]["mode"], {"integer": {"ell": 5}})

    def test_output_is_byte_stable(self):
        argv = ("classify", fixture("briefly_unstable_d2.json"), "--k", "1", "--r", "2", "--n", "9")
        outputs = {run(*argv)[1] for _ in range(3)}
        self.assertEqual(len(outputs), 1)

    def test_missing_file(self):
        code, _, err = run("classify", fixture("nope.json"), "--k", "1", "--r", "2", "--n", "7")
        self.assertEqual(code, 2)
        self.assertIn("cannot read", err)

    def test_bad_parameters(self):
        self.assertEqual(run("classify", fixture("semistable_d2.json"), "--k", "2", "--r", "2", "--n", "7")[0], 2)

    def test_word_bound_keeps_tau(self):
        argv = ("classify", fixture("briefly_unstable_d2.json"), "--k", "2", "--r", "3", "--n", "7")
        for bound in ("8", "1"):
            self.assertEqual(self.verdict(*argv[1:], "--word-bound", bound), "BrieflyUnstablePattern")
        for bound in ("0", "-2"):
            code, _, err = run(*argv, "--word-bound", bound)
            self.assertEqual(code, 2)
            self.assertIn("--word-bound", err)

    def test_limits_are_input_errors(self):
        code, _, err = run("classify", fixture("semistable_d2.json"), "--k", "1", "--r", "2", "--n", "7", "--cap", "0")
        self.assertEqual(code, 2)
        self.assertIn("--cap must be a positive integer", err)
        code, _, err = run("bounds", "--r", "2", "--n", "4", "--degree-cap", "-1")
        self.assertEqual(code, 2)
        self.assertIn("--degree-cap", err)


class TestVerify(unittest.TestCase):
    def test_unknown_suite(self):
        code, _, err = run("verify", "bogus")
        self.assertEqual(code, 2)
        self.assertIn("unknown suite", err)

    def test_example_suite(self):
        code, out, _ = run("verify", "example", "--format", "text")
        self.assertEqual(code, 0)
        self.assertIn("all suites passed", out)

    def test_json_report(self):
        code, out, _ = run("verify", "unipex", "--seed", "3")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertTrue(data["ok"])
        self.assertEqual(data["suites"][0]["seed"], 3)


class TestGen(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp(prefix="monodromy_cli_")

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)
        config.get_settings.cache_clear()

    def test_families(self):
        code, out, _ = run("gen", "semistable", "--d", "2", "--seed", "1")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["dim"], 4)
        code, out, _ = run("gen", "example62", "--ell", "5", "--a", "1")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["dim"], 6)
        self.assertEqual(run("gen", "example62", "--ell", "2")[0], 2)
        self.assertEqual(run("gen", "example62")[0], 2)

    def test_matches_committed_fixture(self):
        code, out, _ = run("gen", "example62", "--ell", "3")
        self.assertEqual(code, 0)
        with open(fixture("example62_ell3.json"), "r", encoding="utf-8") as f:
            self.assertEqual(out, f.read())

    def test_out_file(self):
        path = os.path.join(self.tmp, "nested", "rep.json")
        code, out, _ = run("gen", "example62-sign", "--out", path)
        self.assertEqual(code, 0)
        self.assertEqual(out, "")
        with open(path, "r", encoding="utf-8") as f:
            self.assertEqual(json.load(f)["mode"], {"integer": {"ell": 2}})
        self.assertEqual(os.listdir(os.path.dirname(path)), ["rep.json"])

    def test_residue_round_trip(self):
        path = os.path.join(self.tmp, "rep.json")
        code, _, _ = run("gen", "semistable", "--d", "2", "--mode", "residue", "--modulus", "7", "--out", path)
        self.assertEqual(code, 0)
        code, out, _ = run("classify", path, "--k", "1", "--r", "2", "--n", "7")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["input"]["mode"], {"residue": {"n": 7}})
        self.assertEqual(data["verdict"], "SemistablePattern")

    def test_modulus_needs_residue_mode(self):
        self.assertEqual(run("gen", "semistable", "--mode", "residue")[0], 2)
        self.assertEqual(run("gen", "semistable", "--modulus", "7")[0], 2)

    def test_dimension_cap(self):
        with patch.dict(os.environ, {"MONODROMY_MAX_DIM": "2"}):
            config.reload_settings()
            self.assertEqual(run("gen", "semistable", "--d", "2")[0], 3)
            code, _, err = run("classify", fixture("semistable_d2.json"), "--k", "1", "--r", "2", "--n", "7")
            self.assertEqual(code, 3)
            self.assertIn("MONODROMY_MAX_DIM", err)


if __name__ == "__main__":
    unittest.main()
