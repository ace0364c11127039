import sys
import os
import json
import logging
from collections import Counter, defaultdict
from concurrent import futures
from dataclasses import dataclass

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from proto import lab_pb2
import lab_config
from FiniteField import field_make
from LabErrors import CapabilityError, UsageError
from Tower import (
    color_classes,
    connected_within,
    enumerate_places,
    f8_tower,
    gs_tower,
    paths_of_length,
    self_color_exponents,
    self_color_solutions,
    split_graph,
)


# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)

PASSED = "passed"
FAILED = "failed"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"

PROPOSITIONS = (
    "traceFibers",
    "normFibers",
    "jointFibers",
    "colorPartition",
    "pairPartition",
    "selfColor",
    "graphDegrees",
    "graphDiameter3",
    "pathZeroLemma",
)


@dataclass
class PropositionResult:
    proposition_id: str
    q: int
    status: str
    measured: dict
    witness: dict = None

    @property
    def passed(self):
        return self.status == PASSED

    def to_proto(self):
        return lab_pb2.PropositionResult(
            proposition_id=self.proposition_id,
            q=self.q,
            status=self.status,
            passed=self.passed,
            measured_json=json.dumps(self.measured, sort_keys=True),
            witness_json=json.dumps(self.witness, sort_keys=True) if self.witness else "",
        )


def _result(proposition_id, q, measured, witness):
    status = PASSED if witness is None else FAILED
    if witness is not None:
        logger.error(f"{proposition_id} failed at q = {q}: {witness}")
    return PropositionResult(proposition_id, q, status, measured, witness)


# MARK: Applicability
def _exponent(q):
    t = q.bit_length() - 1
    if q < 2 or q != 1 << t:
        raise CapabilityError(f"q = {q} is not a power of two")
    return t


def applicable(proposition_id, q):
    """Whether the suite runs a proposition at q."""
    if proposition_id not in PROPOSITIONS:
        raise UsageError(f"Unknown proposition {proposition_id!r}; expected one of {', '.join(PROPOSITIONS)}")
    _exponent(q)
    if q > lab_config.FIELD_SCAN_MAX_Q:
        return False
    if proposition_id in ("traceFibers", "normFibers", "jointFibers"):
        return True
    if proposition_id == "colorPartition":
        return q >= 4
    if proposition_id == "pairPartition":
        return 4 <= q <= lab_config.PAIR_PARTITION_MAX_Q
    if proposition_id == "selfColor":
        return 4 <= q <= lab_config.SELF_COLOR_MAX_Q
    return q == 8


# MARK: Field-level checks
def _square_field(q):
    return field_make(2 * _exponent(q))


def _trace_fibers(q):
    field = _square_field(q)
    everything = field.GF.elements
    traces = [int(v) for v in everything ** q + everything]
    counts = Counter(traces)
    subfield = field.subfield(q)
    outside = [v for v in counts if not subfield.contains(v)]
    measured = {"fiber_sizes": sorted(set(counts.values())), "fibers": len(counts)}
    if outside:
        return _result("traceFibers", q, measured, {"trace_outside_subfield": field.to_hex(outside[0])})
    wrong = {field.to_hex(b): c for b, c in counts.items() if c != q}
    if len(counts) != q or wrong:
        return _result("traceFibers", q, measured, {"fiber_sizes": wrong})
    return _result("traceFibers", q, measured, None)


def _norm_fibers(q):
    field = _square_field(q)
    everything = field.GF.elements
    counts = Counter(int(v) for v in everything ** (q + 1))
    measured = {"fiber_sizes": sorted(set(c for b, c in counts.items() if b)), "fibers": len(counts) - 1}
    wrong = {field.to_hex(c): k for c, k in counts.items() if c and k != q + 1}
    if counts.get(0) != 1 or len(counts) != q or wrong:
        return _result("normFibers", q, measured, {"fiber_sizes": wrong, "zero_preimages": counts.get(0, 0)})
    return _result("normFibers", q, measured, None)


def _joint_fibers(q):
    field = _square_field(q)
    everything = field.GF.elements
    traces = everything ** q + everything
    norms = everything ** (q + 1)
    counts = Counter((int(t), int(n)) for t, n in zip(traces, norms) if int(t) and int(n))
    measured = {"pairs_of_size_2": sum(1 for c in counts.values() if c == 2), "pairs_of_size_0": (q - 1) ** 2 - len(counts)}
    wrong = {f"{field.to_hex(t)},{field.to_hex(n)}": c for (t, n), c in counts.items() if c != 2}
    if wrong:
        return _result("jointFibers", q, measured, {"pair_sizes": wrong})
    return _result("jointFibers", q, measured, None)


# MARK: Color checks
def _color_partition(q):
    field = _square_field(q)
    s0 = set(field.subfield(q).s0)
    classes = color_classes(q)
    measured = {
        "classes": len(classes),
        "class_sizes": sorted(set(len(c.members) for c in classes)),
        "trace_fiber_sizes": sorted(set(len(c.trace_fiber) for c in classes)),
    }
    members = [v for c in classes for v in c.members]
    fibers = [v for c in classes for v in c.trace_fiber]
    if len(classes) != q - 1 or measured["class_sizes"] != [q] or measured["trace_fiber_sizes"] != [q]:
        return _result("colorPartition", q, measured, {"class_sizes": {field.to_hex(c.label): len(c.members) for c in classes}})
    if len(members) != len(s0) or set(members) != s0 or set(fibers) != s0:
        return _result("colorPartition", q, measured, {"not_a_partition": True})

    # Every lift of a value of color b has trace b.
    tower = gs_tower(q)
    label_of = {v: c.label for c in classes for v in c.members}
    for alpha in field.sort(s0):
        for gamma in tower.lifts(alpha):
            trace = int(field.trace_to(q, field.element(gamma)))
            if trace != label_of[alpha]:
                return _result("colorPartition", q, measured, {"alpha": field.to_hex(alpha), "lift": field.to_hex(gamma)})
    return _result("colorPartition", q, measured, None)


def _pair_partition(q):
    field = _square_field(q)
    tower = gs_tower(q)
    label_of = {v: c.label for c in color_classes(q) for v in c.members}
    for alpha in tower.split_base:
        groups = defaultdict(list)
        for gamma in tower.lifts(alpha):
            groups[label_of[gamma]].append(gamma)
        conjugate = all(
            len(g) == 2 and int(field.element(g[0]) ** q) == g[1] for g in groups.values()
        )
        if len(groups) != q // 2 or not conjugate:
            witness = {"alpha": field.to_hex(alpha), "groups": {field.to_hex(b): [field.to_hex(v) for v in g] for b, g in groups.items()}}
            return _result("pairPartition", q, {"values_checked": len(tower.split_base)}, witness)
    return _result("pairPartition", q, {"values_checked": len(tower.split_base), "pairs_per_value": q // 2}, None)


def _self_color(q):
    field = _square_field(q)
    classes = color_classes(q)
    intersections = {field.to_hex(c.label): len(set(c.members) & set(c.trace_fiber)) for c in classes}
    solutions = self_color_solutions(q)
    predicted = self_color_exponents(q)
    measured = {
        "intersections": intersections,
        "solutions": len(solutions),
        "predicted": len(predicted),
        "agree": solutions == predicted,
    }
    if _exponent(q) % 2 == 0:
        logger.warning(f"selfColor needs q an odd power of two; recording counts at q = {q}")
        return PropositionResult("selfColor", q, HYPOTHESIS_NOT_MET, measured)
    wrong = {b: c for b, c in intersections.items() if c != 2}
    if wrong or len(solutions) != 2 * q - 2 or solutions != predicted:
        return _result("selfColor", q, measured, {"intersections": wrong, "solutions": [field.to_hex(v) for v in solutions]})
    return _result("selfColor", q, measured, None)


# MARK: Graph checks
def _graph_degrees(q):
    tower = f8_tower()
    field = tower.field
    graph = split_graph(tower)
    g = field.generator
    expected_loops = field.sort([g, g * g, g * g + g])
    loops = field.sort(graph.self_loops())
    measured = {
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "self_loops": [field.to_power(v) for v in loops],
    }
    bad = [field.to_hex(v) for v in graph.vertices if graph.out_degree(v) != 2 or graph.in_degree(v) != 2]
    if bad or len(graph.edges) != 12 or loops != expected_loops:
        return _result("graphDegrees", q, measured, {"bad_vertices": bad})
    return _result("graphDegrees", q, measured, None)


def _graph_diameter(q):
    graph = split_graph(f8_tower())
    reach = next((length for length in range(len(graph.vertices) + 1) if connected_within(graph, length)), None)
    measured = {"connecting_length": reach}
    if reach is None or reach > 3:
        return _result("graphDiameter3", q, measured, {"connecting_length": reach})
    return _result("graphDiameter3", q, measured, None)


def _path_zero_lemma(q):
    tower = f8_tower()
    field = tower.field
    graph = split_graph(tower)
    depth = 3
    places = enumerate_places(tower, depth)
    for i in range(depth + 1):
        for beta in graph.vertices:
            rows = places.coords[:, i] == beta
            starts = paths_of_length(graph, i, beta)
            predicted = sum(starts.values()) * 2 ** (depth - i)
            actual = int(rows.sum())
            if actual != predicted or set(int(v) for v in places.coords[rows, 0]) != set(starts):
                witness = {"i": i, "beta": field.to_hex(beta), "zeros": actual, "predicted": predicted}
                return _result("pathZeroLemma", q, {"places": len(places)}, witness)
    return _result("pathZeroLemma", q, {"places": len(places), "levels": depth + 1}, None)


_CHECKS = {
    "traceFibers": _trace_fibers,
    "normFibers": _norm_fibers,
    "jointFibers": _joint_fibers,
    "colorPartition": _color_partition,
    "pairPartition": _pair_partition,
    "selfColor": _self_color,
    "graphDegrees": _graph_degrees,
    "graphDiameter3": _graph_diameter,
    "pathZeroLemma": _path_zero_lemma,
}


# MARK: Entry points
def check(proposition_id, q):
    """
    Runs one exhaustive check.

    Behavior with Exceptions:
        UsageError for an unknown id; CapabilityError when the proposition
        does not run at this q.
    """
    if not applicable(proposition_id, q):
        raise CapabilityError(f"{proposition_id} does not run at q = {q}")
    return _CHECKS[proposition_id](q)


def verify_all(q):
    """Every applicable check at q, in suite order."""
    _exponent(q)
    if q > lab_config.FIELD_SCAN_MAX_Q:
        raise CapabilityError(f"Field scans stop at q = {lab_config.FIELD_SCAN_MAX_Q}")
    ids = [p for p in PROPOSITIONS if applicable(p, q)]
    # Every check shares this field.
    _square_field(q)
    with futures.ThreadPoolExecutor(max_workers=lab_config.worker_count()) as executor:
        results = list(executor.map(lambda p: check(p, q), ids))
    failed = [r.proposition_id for r in results if r.status == FAILED]
    logger.info(f"Structure suite at q = {q}: {len(results) - len(failed)}/{len(results)} without failure")
    return results


def report_proto(q, results):
    return lab_pb2.VerificationReport(
        schema_version=lab_config.SCHEMA_VERSION,
        q=q,
        results=[r.to_proto() for r in results],
    )
