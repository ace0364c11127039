import sys
import os
import logging
import math
from concurrent import futures
from dataclasses import dataclass, field as dataclass_field

import galois
import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from proto import lab_pb2
import lab_config
from LabErrors import (
    BudgetExceededError,
    CapabilityError,
    ConstructionError,
    DomainError,
)
from Tower import color_classes, split_graph


# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)
diagnostics = logging.getLogger(lab_config.DIAGNOSTICS_LOGGER)

DEGREE_BOUND = "degree-bound"
EXHAUSTIVE = "exhaustive"
EXPLICIT = "explicit-codeword"
OVERLAPPING = "explicit-codeword(overlapping)"
MULTIPLICITY = "fiber-multiplicity"


# MARK: Reports
@dataclass(frozen=True)
class FactoredCodeword:
    """f = prod_i prod_{a in H_i} (x_i - a), stored as ((i, H_i), ...)."""
    factors: tuple

    def roots_of(self, variable):
        for v, roots in self.factors:
            if v == variable:
                return roots
        return ()


@dataclass
class DistanceReport:
    d_lower: int
    d_lower_source: str
    d_upper: int = None
    d_upper_source: str = None
    notes: list = dataclass_field(default_factory=list)

    def __post_init__(self):
        if self.d_upper is not None and self.d_lower > self.d_upper:
            raise ConstructionError(
                f"Lower bound {self.d_lower} exceeds upper bound {self.d_upper}", claim="d_lower <= d_upper"
            )

    @property
    def exact(self):
        return self.d_upper is not None and self.d_lower == self.d_upper

    @property
    def best(self):
        """The distance to report: exact value, else the upper bound, else the lower bound."""
        return self.d_upper if self.d_upper is not None else self.d_lower

    def to_proto(self):
        return lab_pb2.DistanceReport(
            d_lower=self.d_lower,
            d_lower_source=self.d_lower_source,
            d_upper=self.d_upper or 0,
            d_upper_source=self.d_upper_source or "",
            exact=self.exact,
            notes=list(self.notes),
        )


# MARK: Degree bound
def raw_degree_bound(code):
    """n - sum_i E_i deg(x_i), before clamping."""
    tower, depth = code.tower, code.depth
    return code.n - sum(b * tower.pole_degree(v, depth) for v, b in zip(code.box.variables, code.box.bounds))


def degree_lower_bound(code):
    """
    Designed-distance lower bound from the pole degrees of the box variables.

    Behavior with Exceptions:
        DomainError when the tower declares no pole degree for some variable.
    """
    raw = raw_degree_bound(code)
    if raw < 0:
        logger.warning(f"Degree bound of {code.name} is {raw}; clamped at 0")
        return 0
    return raw


def multiplicity_lower_bound(code):
    """
    Fewest places sharing one value tuple of the box variables.

    A codeword depends on those variables only, so a nonzero one is nonzero
    on every place of at least one tuple.
    """
    variables = list(code.box.effective_variables())
    if not variables:
        return code.n
    _, counts = np.unique(code.places.coords[:, variables], axis=0, return_counts=True)
    return int(counts.min())


# MARK: Factored codewords
def zero_mask(code, f):
    """Places where some factor of f vanishes."""
    mask = np.zeros(code.n, dtype=bool)
    for v, roots in f.factors:
        if roots:
            mask |= np.isin(code.places.coords[:, v], list(roots))
    return mask


def _check_in_box(code, f):
    for v, roots in f.factors:
        if len(set(roots)) != len(roots):
            raise DomainError(f"Repeated root in the x_{v} factor")
        if roots and v not in code.box.variables:
            raise DomainError(f"x_{v} is not a variable of {code.name}")
        if len(roots) > code.box.bound_of(v):
            raise DomainError(f"x_{v} factor has degree {len(roots)}, the box allows {code.box.bound_of(v)}")


def expand(code, f):
    """Coefficients of f on the box monomials, in lexicographic order."""
    GF = code.field.GF
    vector = GF([1])
    for v, bound in zip(code.box.variables, code.box.bounds):
        roots = f.roots_of(v)
        poly = galois.Poly.Roots(GF(list(roots)), field=GF) if roots else galois.Poly.One(GF)
        coefficients = GF.Zeros(bound + 1)
        ascending = poly.coeffs[::-1]
        coefficients[:ascending.size] = ascending
        vector = (vector[:, np.newaxis] * coefficients[np.newaxis, :]).reshape(-1)
    return vector


def weight_of_factored(code, f, cross_check=True):
    """
    n minus the number of places where f vanishes.

    With cross_check the coefficient expansion of f is multiplied by the
    generator matrix and its weight must agree.

    Behavior with Exceptions:
        DomainError when f does not lie in the box; ConstructionError when
        the two weights disagree.
    """
    _check_in_box(code, f)
    weight = code.n - int(zero_mask(code, f).sum())
    if cross_check:
        codeword = expand(code, f) @ code.generator
        encoded = int(np.count_nonzero(codeword.view(np.ndarray)))
        if encoded != weight:
            raise ConstructionError(
                f"Factor zeros give weight {weight} but the expanded codeword has weight {encoded}",
                claim="expansion agrees with factor zeros",
            )
    return weight


# MARK: GS witnesses
def _gs_spec(code):
    spec = code.metadata.get("preset")
    if spec is None or spec.family != "gs":
        raise CapabilityError(f"{code.name} is not a GS preset")
    if spec.level != 1:
        raise CapabilityError(f"Witness constructions cover the first GS step only, {code.name} uses level {spec.level}")
    if spec.q < 8:
        raise CapabilityError(f"Witness constructions need q >= 8, {code.name} has q = {spec.q}")
    return spec


def _base_h0(code, spec, variant):
    """
    H_0 and the color class S_1 (label 1). Values of x_0 whose lifts never
    take a color-1 value come first; thm36 adds S_1, cor38 takes the first l.
    """
    q = spec.q
    field = code.field
    classes = color_classes(q)
    s1 = next(c.members for c in classes if c.label == 1)
    touching = set(int(field.trace_to(q, field.element(b))) for b in s1)
    label_of = {v: c.label for c in classes for v in c.members}
    free = [a for a in field.subfield(q).s0 if label_of[a] not in touching]
    if len(free) != q * q // 2 - q:
        raise ConstructionError(
            f"{len(free)} values of x_0 avoid color 1 above them, expected {q * q // 2 - q}",
            claim="|H_0| = q^2/2 - q",
        )
    if variant == "thm34":
        h0 = free
    elif variant == "thm36":
        h0 = free + list(s1)
    else:
        l = spec.l
        h0 = free[:l] if l <= len(free) else free + list(s1[: l - len(free)])
    return tuple(h0), tuple(s1)


def _column_mask(code, variable, value):
    return code.places.coords[:, variable] == value


def _disjoint_values(code, variable, covered, count, exclude, claim):
    picked = []
    for value in code.field.ordered_ints():
        if len(picked) == count:
            break
        if value in exclude:
            continue
        mask = _column_mask(code, variable, value)
        if mask.any() and not (mask & covered).any():
            picked.append(value)
    if len(picked) < count:
        raise ConstructionError(f"Only {len(picked)} values of x_{variable} have zeros disjoint from the others, need {count}", claim=claim)
    return tuple(picked)


def _hypothesis(spec, variant):
    if variant in ("thm36", "cor38") and (spec.q.bit_length() - 1) % 2 == 0:
        raise CapabilityError(f"{variant} witnesses need q an odd power of two, got {spec.q}")


def construct_h(code, variant=None):
    """
    Builds h = h_0 h_1 h_2 with pairwise-disjoint zero sets.

    H_1 takes the first q - 1 values (generator-power order) outside S_1
    whose zeros avoid those of h_0; H_2 the first q - 2 values whose zeros
    avoid both.

    Returns:
        FactoredCodeword

    Behavior with Exceptions:
        ConstructionError naming the counting claim that fails;
        CapabilityError for non-GS codes or unmet hypotheses on q.
    """
    spec = _gs_spec(code)
    variant = variant or spec.variant
    _hypothesis(spec, variant)
    q = spec.q
    x0, x1, x2 = code.box.variables

    h0, s1 = _base_h0(code, spec, variant)
    covered = np.isin(code.places.coords[:, x0], h0)
    h1 = _disjoint_values(code, x1, covered, q - 1, set(s1), claim="H_1 has q - 1 values with zeros disjoint from h_0")
    covered |= np.isin(code.places.coords[:, x1], h1)
    h2 = _disjoint_values(code, x2, covered, q - 2, set(), claim="H_2 has q - 2 values with zeros disjoint from h_0 h_1")
    covered |= np.isin(code.places.coords[:, x2], h2)

    target = q * q * (len(h0) + 2 * q - 3)
    if int(covered.sum()) != target:
        raise ConstructionError(f"h has {int(covered.sum())} zeros, expected {target}", claim="zero count of h")
    diagnostics.info("H_1 holds q - 1 values: the x_1 exponent is bounded by q - 1, not q")
    if variant == "thm36":
        diagnostics.info("thm36 zero count read as (q^2/2) q^2 + (q - 1) q^2 + (q - 2) q^2")
    logger.info(f"{code.name}: |H_0| = {len(h0)}, |H_1| = {len(h1)}, |H_2| = {len(h2)}, {target} zeros")
    return FactoredCodeword(((x0, h0), (x1, h1), (x2, h2)))


def _greedy_values(code, variable, covered, count, exclude):
    rank = code.field.order_key
    picked = []
    for _ in range(count):
        fresh = np.bincount(code.places.coords[~covered, variable], minlength=code.field.size)
        options = [v for v in code.field.ordered_ints() if v not in exclude and v not in picked and fresh[v] > 0]
        if not options:
            break
        best = max(options, key=lambda v: (int(fresh[v]), -rank(v)))
        picked.append(best)
        covered = covered | _column_mask(code, variable, best)
    return tuple(picked), covered


def greedy_factored_witness(code, variant=None, cross_check=True):
    """
    Relaxed witness for when construct_h cannot keep zero sets disjoint: H_0
    as in construct_h, then each of H_1 (outside S_1) and H_2 grows by the
    value adding the most new zeros, ties to the lowest generator power.

    Returns:
        (FactoredCodeword, int): the codeword and its weight, an upper bound on d.
    """
    spec = _gs_spec(code)
    variant = variant or spec.variant
    q = spec.q
    x0, x1, x2 = code.box.variables
    h0, s1 = _base_h0(code, spec, variant)
    covered = np.isin(code.places.coords[:, x0], h0)
    h1, covered = _greedy_values(code, x1, covered, q - 1, set(s1))
    h2, covered = _greedy_values(code, x2, covered, q - 2, set())
    f = FactoredCodeword(((x0, h0), (x1, h1), (x2, h2)))
    weight = weight_of_factored(code, f, cross_check)
    logger.info(f"{code.name}: greedy witness has weight {weight}")
    return f, weight


# MARK: GF(8) witnesses
def f8_witness(code):
    """
    Explicit low-weight codewords of the GF(8) presets.

    Depth 2: (x_1 - b_1) times x_0 - a over the four a that are not
    in-neighbours of b_1 in the splitting graph, with b_1 the first vertex
    having two distinct in-neighbours. Depth 3: the six-factor product
    (x_0 - g)(x_0 - g - 1)(x_0 - g^2 - g)(x_0 - g^2 - 1)(x_1 - g^2)(x_2 - g).
    """
    spec = code.metadata.get("preset")
    if spec is None or spec.family != "f8":
        raise CapabilityError(f"{code.name} is not a GF(8) preset")
    field = code.field

    if spec.variant == "prop44":
        graph = split_graph(code.tower)
        for b1 in graph.vertices:
            predecessors = set(graph.predecessors(b1))
            if len(predecessors) == 2:
                h0 = tuple(v for v in graph.vertices if v not in predecessors)
                f = FactoredCodeword(((0, h0), (1, (b1,))))
                target = 20
                break
        else:
            raise ConstructionError("No vertex has two distinct in-neighbours", claim="x_1 target with two in-neighbours")
    else:
        g = field.generator
        one = field.one
        h0 = tuple(int(v) for v in (g, g + one, g * g + g, g * g + one))
        f = FactoredCodeword(((0, h0), (1, (int(g * g),)), (2, (int(g),))))
        target = 44

    zeros = int(zero_mask(code, f).sum())
    if zeros != target:
        raise ConstructionError(f"{code.name} witness has {zeros} zeros, expected {target}", claim=f"{target} zeros")
    return f


# MARK: GF(4) witnesses
def f4_witness(code):
    """
    Indicator of one value tuple of the box variables on the GF(4) presets.

    Every coordinate of the GF(4) tower takes just two values, so the product
    of (x_v - other value) over the box variables vanishes everywhere except
    on the places matching the first tuple in generator-power order.
    """
    spec = code.metadata.get("preset")
    if spec is None or spec.family != "f4":
        raise CapabilityError(f"{code.name} is not a GF(4) preset")
    factors = []
    for v in code.box.effective_variables():
        values = code.field.sort(set(int(x) for x in code.places.coords[:, v]))
        others = tuple(values[1:])
        if len(others) > code.box.bound_of(v):
            raise ConstructionError(
                f"x_{v} takes {len(values)} values, the box allows degree {code.box.bound_of(v)}",
                claim="two values per coordinate",
            )
        factors.append((v, others))
    return FactoredCodeword(tuple(factors))


# MARK: Exhaustive search
def _symbol_dtype(m):
    if m <= 8:
        return np.uint8
    if m <= 16:
        return np.uint16
    return np.uint32


def _multiples(code, dtype):
    """multiples[i][c] = c * (basis row i), as bitmasks."""
    GF = code.field.GF
    scalars = GF.Range(0, code.field.size)
    return [(scalars[:, np.newaxis] * row[np.newaxis, :]).view(np.ndarray).astype(dtype) for row in code.basis]


def _scan_block(inner, outer_rows, start, stop, size):
    """Minimum weight over outer indices start..stop-1 combined with every inner row."""
    best = math.inf
    k_out = len(outer_rows)
    for index in range(start, stop):
        vector = np.zeros(inner.shape[1], dtype=inner.dtype)
        digits = index
        for t in range(k_out):
            digits, digit = divmod(digits, size)
            if digit:
                vector ^= outer_rows[t][digit]
        weights = np.count_nonzero(inner ^ vector, axis=1)
        if index == 0:
            weights = weights[1:]
        if weights.size:
            best = min(best, int(weights.min()))
    return best


def exhaustive_min_distance(code, budget=lab_config.DEFAULT_SEARCH_BUDGET, workers=None):
    """
    Exact minimum distance by visiting every nonzero message once.

    Messages split into an inner block, tabulated once, and an outer block
    scanned in parallel chunks; field addition is XOR of bitmasks so each
    codeword is one XOR against the table.

    Behavior with Exceptions:
        BudgetExceededError (carrying q^rank) when q^rank exceeds budget.
    """
    size, k, n = code.field.size, code.rank, code.n
    if k == 0:
        raise DomainError(f"{code.name} has rank 0 and no nonzero codeword")
    required = size ** k
    if required > budget:
        raise BudgetExceededError(f"{code.name} has {size}^{k} codewords, over the budget of {budget}", required)

    multiples = _multiples(code, _symbol_dtype(code.field.m))
    k_in = 0
    while k_in < k and size ** (k_in + 1) <= lab_config.SEARCH_BLOCK_ROWS:
        k_in += 1
    inner = np.zeros((1, n), dtype=multiples[0].dtype)
    for i in range(k_in):
        inner = (inner[np.newaxis, :, :] ^ multiples[i][:, np.newaxis, :]).reshape(-1, n)
    outer_rows = multiples[k_in:]
    outer_total = size ** len(outer_rows)

    workers = workers or lab_config.worker_count()
    chunk = max(1, -(-outer_total // (workers * 4)))
    bounds = [(s, min(s + chunk, outer_total)) for s in range(0, outer_total, chunk)]
    with futures.ThreadPoolExecutor(max_workers=workers) as executor:
        results = executor.map(lambda b: _scan_block(inner, outer_rows, b[0], b[1], size), bounds)
        d = min(results)

    logger.info(f"{code.name}: exhaustive search over {required - 1} codewords gives d = {d}")
    return DistanceReport(d_lower=d, d_lower_source=EXHAUSTIVE, d_upper=d, d_upper_source=EXHAUSTIVE)


# MARK: Sampling
def sampled_weight_floor(code, trials, seed=0):
    """
    Smallest weight among `trials` seeded random nonzero codewords. An upper
    bound on d, never a proof of it; math.inf when nothing was sampled.
    """
    best = math.inf
    if trials <= 0:
        return best
    rng = np.random.default_rng(seed)
    GF = code.field.GF
    remaining = trials
    while remaining > 0:
        batch = min(lab_config.SAMPLE_BATCH, remaining)
        messages = rng.integers(0, code.field.size, (batch, code.rank))
        messages = messages[messages.any(axis=1)]
        if messages.size:
            codewords = GF(messages) @ code.basis
            weights = np.count_nonzero(codewords.view(np.ndarray), axis=1)
            best = min(best, int(weights.min()))
        remaining -= batch
    logger.info(f"{code.name}: {trials} samples, smallest weight {best}")
    return best


# MARK: Orchestration
def distance_report(code, budget=lab_config.DEFAULT_SEARCH_BUDGET, prefer_bounds=False):
    """
    Best available bounds for a preset code: the larger of the degree and
    multiplicity bounds, an explicit witness when the family has one, and
    an exhaustive search when it fits the budget (skipped under
    prefer_bounds once the bounds meet).
    """
    notes = []
    lower, lower_source = degree_lower_bound(code), DEGREE_BOUND
    if raw_degree_bound(code) < 0:
        notes.append(f"degree bound {raw_degree_bound(code)} clamped at 0")
    repeated = multiplicity_lower_bound(code)
    if repeated > lower:
        lower, lower_source = repeated, MULTIPLICITY
    upper, upper_source = None, None
    spec = code.metadata.get("preset")

    if spec is not None and spec.family == "gs" and spec.level == 1 and spec.q >= 8:
        try:
            upper, upper_source = weight_of_factored(code, construct_h(code)), EXPLICIT
        except ConstructionError as e:
            note = f"strict witness fails ({e.claim}); using the greedy witness with overlapping zeros"
            notes.append(note)
            diagnostics.warning(f"{code.name}: {note}")
            _, upper = greedy_factored_witness(code)
            upper_source = OVERLAPPING
        except CapabilityError as e:
            notes.append(str(e))
    elif spec is not None and spec.family == "f8":
        upper, upper_source = weight_of_factored(code, f8_witness(code)), EXPLICIT
    elif spec is not None and spec.family == "f4":
        upper, upper_source = weight_of_factored(code, f4_witness(code)), EXPLICIT

    if prefer_bounds and upper is not None and upper == lower:
        return DistanceReport(lower, lower_source, upper, upper_source, notes)

    try:
        found = exhaustive_min_distance(code, budget)
        found.notes = notes
        return found
    except BudgetExceededError as e:
        logger.warning(f"{code.name}: {e}; falling back to bounds")
        notes.append(f"exhaustive search needs {code.field.size}^{code.rank} codewords")
    return DistanceReport(lower, lower_source, upper, upper_source, notes)
