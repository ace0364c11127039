import sys, os
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

import shutil
import sqlite3
import tempfile
import unittest

from DistanceLab import DEGREE_BOUND, EXHAUSTIVE, EXPLICIT, DistanceReport
from ResultStore import ResultStore
from StructureSuite import FAILED, PASSED, PropositionResult


class TestResultStore(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.db_file = os.path.join(self.directory, "results.db")
        self.store = ResultStore(self.db_file)
        self.store.setup_databases()

    def tearDown(self):
        shutil.rmtree(self.directory, ignore_errors=True)

    def test_distance_round_trip(self):
        report = DistanceReport(0, DEGREE_BOUND, 4, EXPLICIT, ["exhaustive search needs 8^20 codewords"])
        self.assertTrue(self.store.save_distance("f8-prop45", 2 ** 31, report))
        loaded = self.store.load_distance("f8-prop45", 2 ** 31)
        self.assertEqual((loaded.d_lower, loaded.d_upper, loaded.d_upper_source), (0, 4, EXPLICIT))
        self.assertEqual(loaded.notes, report.notes)
        self.assertFalse(loaded.exact)

    def test_budget_is_part_of_the_key(self):
        self.store.save_distance("f8-prop45", 1000, DistanceReport(0, DEGREE_BOUND, 4, EXPLICIT))
        self.assertIsNone(self.store.load_distance("f8-prop45", 2000))

    def test_exact_report_serves_any_budget(self):
        self.store.save_distance("f8-prop44", 8 ** 10, DistanceReport(4, EXHAUSTIVE, 4, EXHAUSTIVE))
        loaded = self.store.load_distance("f8-prop44", 10)
        self.assertTrue(loaded.exact)
        self.assertEqual(loaded.d_lower_source, EXHAUSTIVE)

    def test_budget_beyond_64_bits(self):
        self.assertTrue(self.store.save_distance("gs-thm34-q8", 64 ** 30, DistanceReport(1216, DEGREE_BOUND, 1216, EXPLICIT)))
        self.assertEqual(self.store.load_distance("gs-thm34-q8", 64 ** 30).best, 1216)

    def test_replacing_a_report(self):
        self.store.save_distance("f4-rem42a", 10, DistanceReport(0, DEGREE_BOUND))
        self.store.save_distance("f4-rem42a", 10, DistanceReport(2, EXHAUSTIVE, 2, EXHAUSTIVE))
        self.assertEqual(self.store.load_distance("f4-rem42a", 10).d_upper, 2)
        with sqlite3.connect(self.db_file) as conn:
            count = conn.execute("SELECT COUNT(*) FROM distance_reports").fetchone()[0]
        self.assertEqual(count, 1)

    def test_verification_history(self):
        results = [
            PropositionResult("traceFibers", 8, PASSED, {}),
            PropositionResult("normFibers", 8, FAILED, {}, {"fiber_sizes": {}}),
        ]
        self.assertTrue(self.store.record_verification(8, results))
        self.assertEqual(self.store.verification_history(8), [("traceFibers", PASSED), ("normFibers", FAILED)])
        self.assertEqual(self.store.verification_history(4), [])

    def test_missing_tables_give_neutral_values(self):
        store = ResultStore(os.path.join(self.directory, "empty.db"))
        self.assertIsNone(store.load_distance("f8-prop44", 10))
        self.assertFalse(store.save_distance("f8-prop44", 10, DistanceReport(4, DEGREE_BOUND)))
        self.assertFalse(store.record_verification(8, [PropositionResult("traceFibers", 8, PASSED, {})]))
        self.assertEqual(store.verification_history(8), [])


if __name__ == '__main__':
    unittest.main()
