import sys, os
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

import math
import unittest

from DistanceLab import (
    DEGREE_BOUND,
    EXHAUSTIVE,
    EXPLICIT,
    MULTIPLICITY,
    OVERLAPPING,
    DistanceReport,
    FactoredCodeword,
    construct_h,
    degree_lower_bound,
    distance_report,
    exhaustive_min_distance,
    f4_witness,
    f8_witness,
    greedy_factored_witness,
    multiplicity_lower_bound,
    raw_degree_bound,
    sampled_weight_floor,
    weight_of_factored,
    zero_mask,
)
from EvaluationCode import EvalCode, MonomialBox
from LabErrors import BudgetExceededError, CapabilityError, ConstructionError, DomainError
from Presets import build_preset
from Tower import enumerate_places, f8_tower

SLOW = os.environ.get("LRCLAB_SLOW")


class TestDistanceReport(unittest.TestCase):
    def test_exact_and_best(self):
        report = DistanceReport(4, DEGREE_BOUND, 4, EXPLICIT)
        self.assertTrue(report.exact)
        self.assertEqual(report.best, 4)
        report = DistanceReport(0, DEGREE_BOUND, 4, EXPLICIT)
        self.assertFalse(report.exact)
        self.assertEqual(report.best, 4)
        self.assertEqual(DistanceReport(3, DEGREE_BOUND).best, 3)

    def test_inconsistent_bounds(self):
        with self.assertRaises(ConstructionError):
            DistanceReport(5, DEGREE_BOUND, 4, EXPLICIT)

    def test_proto(self):
        message = DistanceReport(704, DEGREE_BOUND, 800, OVERLAPPING, ["greedy"]).to_proto()
        self.assertEqual((message.d_lower, message.d_upper, message.exact), (704, 800, False))
        self.assertEqual(list(message.notes), ["greedy"])


class TestDegreeBound(unittest.TestCase):
    def test_f8_bounds(self):
        self.assertEqual(degree_lower_bound(build_preset("f8-prop44")), 4)
        self.assertEqual(degree_lower_bound(build_preset("f8-prop45")), 0)

    def test_clamped(self):
        code = EvalCode(enumerate_places(f8_tower(), 2), MonomialBox((5, 2)))
        self.assertEqual(raw_degree_bound(code), -4)
        self.assertEqual(degree_lower_bound(code), 0)


class TestMultiplicityBound(unittest.TestCase):
    def test_places_per_tuple(self):
        # x_3 has two lifts over each (x_0, x_1, x_2).
        self.assertEqual(multiplicity_lower_bound(build_preset("f8-prop45")), 2)
        # x_0 and x_j are free, every other coordinate is a box variable.
        for j in range(2, 7):
            self.assertEqual(multiplicity_lower_bound(build_preset(f"f4-prop41-j{j}")), 4)

    def test_constant_box(self):
        code = build_preset("f4-prop41-j1")
        self.assertEqual(multiplicity_lower_bound(code), code.n)

    def test_never_above_the_distance(self):
        for name in ("f4-rem42a", "f4-rem42b", "f4-prop41-j3", "f4-prop41-j4"):
            code = build_preset(name)
            self.assertLessEqual(multiplicity_lower_bound(code), exhaustive_min_distance(code).d_lower)


class TestFactoredCodewords(unittest.TestCase):
    def setUp(self):
        self.code = build_preset("f8-prop44")

    def test_f8_prop44_witness(self):
        f = f8_witness(self.code)
        self.assertEqual(int(zero_mask(self.code, f).sum()), 20)
        self.assertEqual(weight_of_factored(self.code, f), 4)
        self.assertEqual(len(f.roots_of(0)), 4)
        self.assertEqual(len(f.roots_of(1)), 1)

    def test_f8_prop45_witness(self):
        code = build_preset("f8-prop45")
        f = f8_witness(code)
        self.assertEqual(int(zero_mask(code, f).sum()), 44)
        self.assertEqual(weight_of_factored(code, f), 4)

    def test_witness_outside_box(self):
        g = self.code.field.generator
        repeated = FactoredCodeword(((0, (int(g), int(g))),))
        with self.assertRaises(DomainError):
            weight_of_factored(self.code, repeated)
        too_many = FactoredCodeword(((1, (int(g), int(g * g))),))
        with self.assertRaises(DomainError):
            weight_of_factored(self.code, too_many)
        missing_variable = FactoredCodeword(((2, (int(g),)),))
        with self.assertRaises(DomainError):
            weight_of_factored(self.code, missing_variable)

    def test_constant_codeword(self):
        self.assertEqual(weight_of_factored(self.code, FactoredCodeword(())), 24)

    def test_f4_witness(self):
        for j in range(1, 7):
            code = build_preset(f"f4-prop41-j{j}")
            f = f4_witness(code)
            self.assertEqual(len(f.factors), j - 1)
            self.assertEqual(weight_of_factored(code, f), 4)
        for name in ("f4-rem42a", "f4-rem42b"):
            code = build_preset(name)
            self.assertEqual(weight_of_factored(code, f4_witness(code)), 2)

    def test_witness_needs_its_family(self):
        with self.assertRaises(CapabilityError):
            f8_witness(build_preset("f4-rem42a"))
        with self.assertRaises(CapabilityError):
            f4_witness(self.code)
        with self.assertRaises(CapabilityError):
            construct_h(self.code)
        with self.assertRaises(CapabilityError):
            construct_h(build_preset("gs-thm34-q4"))


class TestExhaustiveSearch(unittest.TestCase):
    def test_rem42a(self):
        report = exhaustive_min_distance(build_preset("f4-rem42a"))
        self.assertEqual((report.d_lower, report.d_upper), (2, 2))
        self.assertEqual(report.d_lower_source, EXHAUSTIVE)
        self.assertTrue(report.exact)

    def test_rem42b(self):
        self.assertEqual(exhaustive_min_distance(build_preset("f4-rem42b")).d_lower, 2)

    def test_prop41_repetition(self):
        for j in (2, 3, 4):
            self.assertEqual(exhaustive_min_distance(build_preset(f"f4-prop41-j{j}")).d_lower, 4)

    def test_worker_count_does_not_change_result(self):
        code = build_preset("f4-prop41-j4")
        self.assertEqual(
            exhaustive_min_distance(code, workers=1).d_lower,
            exhaustive_min_distance(code, workers=3).d_lower,
        )

    def test_budget(self):
        code = build_preset("f8-prop44")
        with self.assertRaises(BudgetExceededError) as ctx:
            exhaustive_min_distance(code, budget=1000)
        self.assertEqual(ctx.exception.required_budget, 8 ** 10)

    @unittest.skipUnless(SLOW, "set LRCLAB_SLOW to visit all 8^10 messages")
    def test_prop44_exhaustive(self):
        self.assertEqual(exhaustive_min_distance(build_preset("f8-prop44"), budget=8 ** 10).d_lower, 4)


class TestSampling(unittest.TestCase):
    def test_nothing_sampled(self):
        self.assertTrue(math.isinf(sampled_weight_floor(build_preset("f8-prop45"), 0)))

    def test_floor_respects_distance(self):
        code = build_preset("f8-prop45")
        floor = sampled_weight_floor(code, 2000, seed=1)
        self.assertGreaterEqual(floor, 4)
        self.assertLessEqual(floor, 48)
        self.assertEqual(floor, sampled_weight_floor(code, 2000, seed=1))

    @unittest.skipUnless(SLOW, "set LRCLAB_SLOW to draw a million samples")
    def test_million_samples(self):
        self.assertGreaterEqual(sampled_weight_floor(build_preset("f8-prop45"), 10 ** 6, seed=0), 4)


class TestDistanceReports(unittest.TestCase):
    def test_prop44_from_bounds(self):
        report = distance_report(build_preset("f8-prop44"), prefer_bounds=True)
        self.assertTrue(report.exact)
        self.assertEqual(report.best, 4)
        self.assertEqual((report.d_lower_source, report.d_upper_source), (DEGREE_BOUND, EXPLICIT))

    def test_prop45_falls_back_to_bounds(self):
        report = distance_report(build_preset("f8-prop45"), budget=1000)
        self.assertEqual((report.d_lower, report.d_upper), (2, 4))
        self.assertEqual(report.d_lower_source, MULTIPLICITY)
        self.assertFalse(report.exact)
        self.assertTrue(any("8^20" in note for note in report.notes))

    def test_small_code_searched(self):
        report = distance_report(build_preset("f4-rem42a"))
        self.assertTrue(report.exact)
        self.assertEqual(report.d_lower_source, EXHAUSTIVE)

    def test_prop41_beyond_the_search_budget(self):
        for j in (5, 6):
            code = build_preset(f"f4-prop41-j{j}")
            report = distance_report(code)
            self.assertEqual((code.n, code.rank), (2 ** (j + 1), 2 ** (j - 1)))
            self.assertEqual((report.d_lower, report.d_upper), (4, 4))
            self.assertEqual((report.d_lower_source, report.d_upper_source), (MULTIPLICITY, EXPLICIT))
            self.assertTrue(report.exact)
            self.assertTrue(any(f"4^{2 ** (j - 1)}" in note for note in report.notes))

    def test_prop41_bounds_meet_without_search(self):
        report = distance_report(build_preset("f4-prop41-j3"), prefer_bounds=True)
        self.assertTrue(report.exact)
        self.assertEqual(report.d_upper_source, EXPLICIT)


@unittest.skipUnless(SLOW, "set LRCLAB_SLOW to build the GS q = 8 codes")
class TestGarciaStichtenothWitnesses(unittest.TestCase):
    def test_thm34(self):
        code = build_preset("gs-thm34-q8")
        self.assertEqual(degree_lower_bound(code), 1216)
        f = construct_h(code)
        self.assertEqual(len(f.roots_of(0)), 24)
        self.assertEqual(weight_of_factored(code, f), 1216)
        report = distance_report(code, prefer_bounds=True)
        self.assertTrue(report.exact)
        self.assertEqual(report.best, 1216)

    def test_thm36_disjointness_fails(self):
        code = build_preset("gs-thm36-q8")
        self.assertEqual(degree_lower_bound(code), 704)
        with self.assertRaises(ConstructionError) as ctx:
            construct_h(code)
        self.assertIn("H_2", ctx.exception.claim)
        _, weight = greedy_factored_witness(code)
        self.assertEqual(weight, 800)

    def test_cor38_sweep_witnesses(self):
        for l in (1, 10, 24):
            code = build_preset(f"gs-cor38-q8-l{l}")
            self.assertEqual(weight_of_factored(code, construct_h(code)), 64 * (43 - l))
            self.assertEqual(degree_lower_bound(code), 64 * (43 - l))

    def test_cor38_past_the_disjoint_range(self):
        for l in (25, 32):
            code = build_preset(f"gs-cor38-q8-l{l}")
            with self.assertRaises(ConstructionError):
                construct_h(code)
            report = distance_report(code, prefer_bounds=True)
            self.assertEqual(report.d_lower, 64 * (43 - l))
            self.assertEqual(report.d_lower_source, DEGREE_BOUND)
            self.assertEqual(report.d_upper_source, OVERLAPPING)
            self.assertGreater(report.d_upper, report.d_lower)
            self.assertFalse(report.exact)


if __name__ == '__main__':
    unittest.main()
