import sys, os
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

import json
import unittest

from LabErrors import CapabilityError, UsageError
from StructureSuite import (
    HYPOTHESIS_NOT_MET,
    PASSED,
    PROPOSITIONS,
    applicable,
    check,
    report_proto,
    verify_all,
)

SLOW = os.environ.get("LRCLAB_SLOW")


class TestApplicability(unittest.TestCase):
    def test_q8_runs_everything(self):
        self.assertTrue(all(applicable(p, 8) for p in PROPOSITIONS))

    def test_small_and_large_q(self):
        self.assertEqual([p for p in PROPOSITIONS if applicable(p, 2)], ["traceFibers", "normFibers", "jointFibers"])
        at_32 = [p for p in PROPOSITIONS if applicable(p, 32)]
        self.assertEqual(at_32, ["traceFibers", "normFibers", "jointFibers", "colorPartition", "selfColor"])
        self.assertFalse(applicable("traceFibers", 128))

    def test_bad_arguments(self):
        with self.assertRaises(UsageError):
            applicable("riemannHypothesis", 8)
        with self.assertRaises(CapabilityError):
            applicable("traceFibers", 6)
        with self.assertRaises(CapabilityError):
            check("graphDegrees", 16)


class TestSuite(unittest.TestCase):
    def test_all_pass_at_q8(self):
        results = verify_all(8)
        self.assertEqual([r.proposition_id for r in results], list(PROPOSITIONS))
        for result in results:
            self.assertEqual(result.status, PASSED, f"{result.proposition_id}: {result.witness}")

    def test_q4_self_color_outside_hypothesis(self):
        results = {r.proposition_id: r for r in verify_all(4)}
        self.assertEqual(len(results), 6)
        self.assertEqual(results["selfColor"].status, HYPOTHESIS_NOT_MET)
        self.assertTrue(all(r.passed for p, r in results.items() if p != "selfColor"))

    def test_q2_field_checks(self):
        self.assertTrue(all(r.passed for r in verify_all(2)))

    def test_single_checks(self):
        self.assertTrue(check("normFibers", 16).passed)
        result = check("jointFibers", 8)
        self.assertEqual(result.measured["pairs_of_size_2"] + result.measured["pairs_of_size_0"], 49)

    def test_graph_measurements(self):
        result = check("graphDegrees", 8)
        self.assertEqual(result.measured["edges"], 12)
        self.assertEqual(len(result.measured["self_loops"]), 3)
        self.assertLessEqual(check("graphDiameter3", 8).measured["connecting_length"], 3)

    def test_report(self):
        results = verify_all(2)
        report = report_proto(2, results)
        self.assertEqual(report.schema_version, 1)
        self.assertEqual(len(report.results), 3)
        self.assertTrue(report.results[0].passed)
        self.assertIn("fiber_sizes", json.loads(report.results[0].measured_json))

    @unittest.skipUnless(SLOW, "set LRCLAB_SLOW to scan GF(1024)")
    def test_q32(self):
        results = {r.proposition_id: r for r in verify_all(32)}
        self.assertEqual(len(results), 5)
        self.assertTrue(all(r.passed for r in results.values()))
        self.assertEqual(results["selfColor"].measured["solutions"], 62)


if __name__ == '__main__':
    unittest.main()
