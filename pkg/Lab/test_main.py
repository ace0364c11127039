import sys, os
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

import csv
import json
import shutil
import tempfile
import unittest

import main
from proto import lab_pb2
from Exporter import CSV_HEADER, DOT_HEADER
from ResultStore import ResultStore
from StructureSuite import FAILED, PASSED, PropositionResult


class TestCommandLine(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory, ignore_errors=True)

    def path(self, name):
        return os.path.join(self.directory, name)

    def run_json(self, *argv):
        out = self.path("out.json")
        status = main.main(list(argv) + ["--out", out, "--quiet"])
        with open(out, encoding="utf-8") as handle:
            return status, json.load(handle)

    def read_text(self, name):
        with open(self.path(name), encoding="utf-8") as handle:
            return handle.read()

    # MARK: Arguments
    def test_budget_forms(self):
        self.assertEqual(main.validate_budget("8^10"), 8 ** 10)
        self.assertEqual(main.validate_budget("2**31"), 2 ** 31)
        self.assertEqual(main.validate_budget("1000"), 1000)

    def test_format_from_extension(self):
        config, _ = main.parse_arguments(["scatter", "--out", "table.csv"])
        self.assertEqual(config.output_format, "csv")
        config, _ = main.parse_arguments(["build", "--preset", "f4-rem42a"])
        self.assertEqual(config.output_format, "json")

    def test_bad_q_is_usage_error(self):
        self.assertEqual(main.main(["verify", "--q", "6"]), 2)

    def test_unknown_preset(self):
        self.assertEqual(main.main(["build", "--preset", "hermitian", "--out", self.path("x.json"), "--quiet"]), 2)
        self.assertFalse(os.path.exists(self.path("x.json")))

    def test_wrong_format_for_command(self):
        self.assertEqual(main.main(["field", "--format", "dot", "--out", self.path("f.dot"), "--quiet"]), 2)

    def test_missing_bounds_arguments(self):
        self.assertEqual(main.main(["bounds", "--r", "7", "--out", self.path("b.json"), "--quiet"]), 2)

    # MARK: Commands
    def test_field(self):
        status, data = self.run_json("field", "--q", "8")
        self.assertEqual(status, 0)
        self.assertEqual(data["schema_version"], 1)
        self.assertEqual(data["m"], 6)

    def test_reducible_modulus(self):
        self.assertEqual(main.main(["field", "--m", "2", "--modulus", "0b101", "--out", self.path("f.json"), "--quiet"]), 2)

    def test_build_prop44(self):
        status, data = self.run_json("build", "--preset", "f8-prop44", "--format", "json")
        self.assertEqual(status, 0)
        self.assertEqual((data["n"], data["k"], data["d"], data["r"]), (24, 10, 4, 1))
        self.assertTrue(data["distance"]["exact"])

    def test_params_are_cheap(self):
        status, data = self.run_json("params", "--preset", "f8-prop45")
        self.assertEqual(status, 0)
        self.assertEqual((data["n"], data["k"], data["k_nominal"]), (48, 20, 20))
        self.assertEqual(data["distance"]["d_lower_source"], "degree-bound")

    def test_distance_with_budget_fallback(self):
        status, data = self.run_json("distance", "--preset", "f8-prop45", "--budget", "1000", "--trials", "500")
        self.assertEqual(status, 0)
        self.assertEqual(data["d"], 4)
        self.assertFalse(data["distance"]["exact"])
        self.assertGreaterEqual(data["sampled_floor"], 4)

    def test_distance_cache(self):
        db = self.path("cache.db")
        first = self.run_json("distance", "--preset", "f4-rem42a", "--cache", db)
        second = self.run_json("distance", "--preset", "f4-rem42a", "--cache", db)
        self.assertEqual(first, second)
        self.assertTrue(ResultStore(db).load_distance("f4-rem42a", 10).exact)

    def test_places(self):
        status, data = self.run_json("places", "--tower", "f8", "--depth", "2")
        self.assertEqual(status, 0)
        self.assertEqual(len(data["places"]), 24)
        self.assertEqual(len(data["places"][0]["coords_hex"]), 3)
        self.assertEqual([f["coordinate"] for f in data["fibers"]], [0, 1, 2])

    def test_places_fibers_on_f4(self):
        status, data = self.run_json("places", "--tower", "f4", "--depth", "2")
        self.assertEqual(status, 0)
        # Every coordinate takes two values, each on half of the eight places.
        for fibers in data["fibers"]:
            self.assertEqual((fibers["values"], fibers["min_places"], fibers["max_places"]), (2, 4, 4))

    def test_places_over_cap(self):
        self.assertEqual(main.main(["places", "--tower", "gs-q32", "--depth", "2", "--out", self.path("p.json"), "--quiet"]), 4)

    def test_places_csv_and_dot(self):
        self.assertEqual(main.main(["places", "--tower", "f4", "--depth", "2", "--out", self.path("p.csv"), "--quiet"]), 0)
        text = self.read_text("p.csv")
        self.assertTrue(text.startswith(CSV_HEADER))
        rows = list(csv.reader(text.splitlines()[1:]))
        self.assertEqual(rows[0], ["index", "x0", "x1", "x2"])
        self.assertEqual(len(rows), 9)

        self.assertEqual(main.main(["places", "--tower", "f8", "--out", self.path("g.dot"), "--quiet"]), 0)
        dot = self.read_text("g.dot")
        self.assertTrue(dot.startswith(DOT_HEADER))
        self.assertEqual(dot.count("->"), 12)

    def test_generator_matrix_binary(self):
        out = self.path("m.bin")
        self.assertEqual(main.main(["build", "--preset", "f4-rem42a", "--matrix", "--out", out, "--quiet"]), 0)
        with open(out, "rb") as handle:
            matrix = lab_pb2.GeneratorMatrix()
            matrix.ParseFromString(handle.read())
        self.assertEqual((matrix.n, matrix.k_nominal, matrix.m), (8, 4, 2))
        self.assertEqual(len(matrix.symbols), 32)
        # The first monomial is the constant 1.
        self.assertEqual(list(matrix.symbols[:8]), [1] * 8)

    def test_repair_demo(self):
        status, data = self.run_json("repair-demo", "--preset", "gs-thm34-q4", "--position", "9", "--seed", "4")
        self.assertEqual(status, 0)
        self.assertTrue(data["ok"])
        self.assertEqual(data["erased_hex"], data["repaired_hex"])
        self.assertEqual(len(data["fiber"]), 3)

    def test_repair_demo_is_deterministic(self):
        argv = ["repair-demo", "--preset", "f8-prop44", "--position", "3", "--seed", "9", "--quiet"]
        self.assertEqual(main.main(argv + ["--out", self.path("a.json")]), 0)
        self.assertEqual(main.main(argv + ["--out", self.path("b.json")]), 0)
        self.assertEqual(self.read_text("a.json"), self.read_text("b.json"))

    def test_verify(self):
        db = self.path("runs.db")
        status, data = self.run_json("verify", "--q", "8", "--cache", db)
        self.assertEqual(status, 0)
        self.assertEqual(len(data["results"]), 9)
        self.assertTrue(all(r["passed"] for r in data["results"]))
        self.assertEqual(len(ResultStore(db).verification_history(8)), 9)

    def test_bounds(self):
        status, data = self.run_json("bounds", "--r", "7", "--q", "8", "--delta", "1/4")
        self.assertEqual(status, 0)
        self.assertAlmostEqual(data["btv"], 35 / 96)
        self.assertEqual((data["delta_num"], data["delta_den"]), (1, 4))

    def test_scatter_csv(self):
        self.assertEqual(main.main(["scatter", "--q", "8", "--out", self.path("table.csv"), "--quiet"]), 0)
        text = self.read_text("table.csv")
        self.assertTrue(text.startswith(CSV_HEADER))
        rows = list(csv.DictReader(text.splitlines()[1:]))
        self.assertEqual(len(rows), 7 + 32)
        first = rows[0]
        self.assertEqual(first["label"], "gs-thm34-q8")
        self.assertEqual((first["delta_num"], first["delta_den"], first["R_num"], first["R_den"]), ("19", "56", "25", "64"))
        self.assertEqual((first["paper_ok"], first["exact"], first["d_upper"]), ("1", "1", "1216"))
        by_label = {row["label"]: row for row in rows}
        self.assertEqual(by_label["gs-cor38-q8-l24"]["exact"], "1")
        self.assertEqual(by_label["gs-cor38-q8-l25"]["exact"], "0")

    def test_scatter_without_sweep(self):
        status, data = self.run_json("scatter", "--q", "8", "--no-sweep")
        self.assertEqual(status, 0)
        self.assertEqual(len(data["points"]), 7)
        self.assertEqual([point["variant"] for point in data["asymptotic"]], ["thm34", "thm36"])


class TestRegressions(unittest.TestCase):
    def result(self, proposition, status):
        return PropositionResult(proposition, 8, status, "", None)

    def test_failure_after_a_pass(self):
        history = [("selfColor", PASSED), ("traceFibers", FAILED)]
        results = [self.result("selfColor", FAILED), self.result("traceFibers", FAILED), self.result("normFibers", PASSED)]
        self.assertEqual(main.regressions(history, results), ["selfColor"])

    def test_no_history(self):
        self.assertEqual(main.regressions([], [self.result("selfColor", FAILED)]), [])


if __name__ == '__main__':
    unittest.main()
