import functools
import logging
from collections import Counter
from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np

import lab_config
from FiniteField import FiniteField, field_make, field_of
from LabErrors import CapabilityError, DomainError, PlaceCapError, StructureError


# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)


# MARK: Tower definition
@dataclass(eq=False)
class TowerSpec:
    """
    A recursive Artin-Schreier tower x_{i+1}^q_loc + x_{i+1} = rho(x_i).

    rhs maps an element to the (numerator, denominator) pair of rho; a zero
    denominator marks a pole. split_base lists the x_0 values of the completely
    splitting places, in generator-power order. pole_degrees maps a depth j to
    the declared degrees (deg x_0, ..., deg x_j) of the pole divisors in F_j.
    """
    name: str
    field: FiniteField
    q_loc: int
    rhs: Callable
    split_base: tuple
    pole_degrees: Callable
    description: str = ""
    _lifts: dict = dataclass_field(default_factory=dict, repr=False)

    def rho(self, value):
        alpha = self.field.element(value)
        numerator, denominator = self.rhs(alpha)
        if int(denominator) == 0:
            raise StructureError(f"{self.field.to_hex(value)} is a pole of the recursion of {self.name}", element=int(value))
        return numerator / denominator

    def lifts(self, value, depth=None):
        """The q_loc values x_{i+1} above x_i = value, in generator-power order."""
        value = int(value)
        cached = self._lifts.get(value)
        if cached is not None:
            return cached
        roots = self.field.linearized_roots(self.q_loc, self.rho(value))
        if len(roots) != self.q_loc:
            raise StructureError(
                f"{self.field.to_hex(value)} lifts to {len(roots)} values in {self.name}, expected {self.q_loc}",
                element=value,
                depth=depth,
            )
        self._lifts[value] = tuple(roots)
        return self._lifts[value]

    def pole_degree(self, i, j):
        degrees = self.pole_degrees(j)
        if degrees is None or i >= len(degrees):
            raise DomainError(f"No pole degree declared for x_{i} in F_{j} of {self.name}")
        return degrees[i]


def gs_tower(q):
    """x_{i+1}^q + x_{i+1} = x_i^q / (x_i^(q-1) + 1) over GF(q^2), split over GF(q^2) minus GF(q)."""
    t = q.bit_length() - 1
    if q < 2 or q != 1 << t or 2 * t > lab_config.MAX_FIELD_DEGREE:
        raise CapabilityError(f"q = {q} is not a supported power of two")
    field = field_make(2 * t)
    view = field.subfield(q)
    return TowerSpec(
        name=f"gs-q{q}",
        field=field,
        q_loc=q,
        rhs=lambda a: (a ** q, a ** (q - 1) + field.one),
        split_base=view.s0,
        pole_degrees=lambda j: (q ** j,) * (j + 1),
        description=f"Garcia-Stichtenoth tower over GF({q * q})",
    )


def f4_tower():
    """x_i^2 + x_i = x_{i-1}^2 / (x_{i-1} + 1) over GF(4), split over {a, a + 1}."""
    field = field_make(2)
    alpha = field.generator
    return TowerSpec(
        name="f4",
        field=field,
        q_loc=2,
        rhs=lambda a: (a ** 2, a + field.one),
        split_base=tuple(field.sort([alpha, alpha + field.one])),
        pole_degrees=lambda j: (2 ** j,) * (j + 1),
        description="Garcia-Stichtenoth tower over GF(4)",
    )


def f8_tower():
    """x_{i+1}^2 + x_{i+1} = x_i + 1 + 1/x_i over GF(8) with b^3 = b + 1, split over GF(8) minus GF(2)."""
    field = field_make(3, 0b1011)
    view = field.subfield(2)
    return TowerSpec(
        name="f8",
        field=field,
        q_loc=2,
        rhs=lambda a: (a * a + a + field.one, a),
        split_base=view.s0,
        pole_degrees=lambda j: (2 ** j,) * (j + 1),
        description="van der Geer-van der Vlugt tower over GF(8)",
    )


@functools.lru_cache(maxsize=None)
def builtin_tower(name):
    if name == "f4":
        return f4_tower()
    if name == "f8":
        return f8_tower()
    if name.startswith("gs-q"):
        q = int(name[len("gs-q"):])
        if q not in lab_config.ENUMERATION_QS:
            raise CapabilityError(f"GS towers are enumerable for q in {lab_config.ENUMERATION_QS}, not {q}")
        return gs_tower(q)
    raise CapabilityError(f"Unknown tower {name!r}; expected f4, f8 or gs-q<q>")


# MARK: Places
@dataclass(frozen=True)
class Place:
    """A completely splitting rational place of F_j, as its coordinates (x_0(P), ..., x_j(P))."""
    coords: tuple
    index: int
    tower: str


class PlaceSet:
    """The ordered set B of places of one tower at one depth."""

    def __init__(self, tower, depth, rows):
        self.tower = tower
        self.depth = depth
        self.coords = np.asarray(rows, dtype=np.int64).reshape(len(rows), depth + 1)
        self.places = [Place(tuple(int(v) for v in row), index, tower.name) for index, row in enumerate(rows)]
        self._index = {p.coords: p.index for p in self.places}

    def __len__(self):
        return len(self.places)

    def __iter__(self):
        return iter(self.places)

    def __getitem__(self, index):
        return self.places[index]

    @property
    def field(self):
        return self.tower.field

    def column(self, i):
        """x_i evaluated at every place, as a field array."""
        return self.field.array(self.coords[:, i])

    def index_of(self, coords):
        index = self._index.get(tuple(int(v) for v in coords))
        if index is None:
            raise DomainError(f"{coords} is not a place of {self.tower.name} at depth {self.depth}")
        return index

    def __contains__(self, place):
        return self._index.get(place.coords) == place.index


def split_base(tower, depth=1):
    """
    Returns the declared splitting set of the tower after checking that every
    element, and every lift of it up to the given depth, lifts to exactly
    q_loc values.
    """
    frontier = list(tower.split_base)
    for level in range(1, depth + 1):
        next_frontier = set()
        for value in frontier:
            next_frontier.update(tower.lifts(value, depth=level))
        frontier = tower.field.sort(next_frontier)
    return tower.split_base


def expected_place_count(tower, depth):
    return len(tower.split_base) * tower.q_loc ** depth


def enumerate_places(tower, depth, cap=lab_config.DEFAULT_PLACE_CAP):
    """
    Enumerates every place of F_depth above the splitting set.

    Places come out in lexicographic order of (x_0, ..., x_depth) under the
    generator-power order of the constant field.

    Behavior with Exceptions:
        PlaceCapError when the exact count |split_base| * q_loc^depth exceeds
        cap; StructureError when some value fails to split completely.
    """
    if depth < 1:
        raise DomainError(f"Depth must be at least 1, got {depth}")
    expected = expected_place_count(tower, depth)
    if expected > cap:
        raise PlaceCapError(f"{tower.name} at depth {depth} has {expected} places, over the cap of {cap}", expected)

    rows = [(value,) for value in tower.split_base]
    for level in range(1, depth + 1):
        rows = [row + (gamma,) for row in rows for gamma in tower.lifts(row[-1], depth=level)]

    logger.info(f"Enumerated {len(rows)} places of {tower.name} at depth {depth}")
    return PlaceSet(tower, depth, rows)


def check_recursion(places):
    """Indices of places whose coordinates break the defining equation (empty when all hold)."""
    tower = places.tower
    broken = []
    for place in places:
        for i in range(places.depth):
            upper = tower.field.element(place.coords[i + 1])
            if upper ** tower.q_loc + upper != tower.rho(place.coords[i]):
                broken.append(place.index)
                break
    return broken


def coordinate_fiber_sizes(places, i):
    """Number of places taking each value of x_i."""
    return Counter(int(v) for v in places.coords[:, i])


def recovery_fiber(place, places):
    """
    Places sharing x_0, ..., x_{j-1} with the given place, excluding it.

    Behavior with Exceptions:
        DomainError when the place is not in the set.
    """
    if place not in places:
        raise DomainError(f"Place {place.index} is not in the enumerated set")
    prefix = np.asarray(place.coords[:-1], dtype=np.int64)
    same = np.all(places.coords[:, :-1] == prefix, axis=1)
    return [places[int(i)] for i in np.flatnonzero(same) if int(i) != place.index]


# MARK: Colors
def color_of(q, beta):
    """b = N(beta) / Tr(beta) in GF(q)*, defined on S_0 (nonzero trace)."""
    field = field_of(beta)
    trace = field.trace_to(q, beta)
    if int(trace) == 0:
        raise DomainError(f"{field.to_hex(beta)} has zero trace and no color")
    return field.norm_to(q, beta) / trace


@dataclass(frozen=True)
class ColorClass:
    label: int
    members: tuple
    trace_fiber: tuple


def color_classes(q):
    """The q - 1 classes S_b together with the trace fibers B_b, ordered by label."""
    t = q.bit_length() - 1
    field = field_make(2 * t)
    view = field.subfield(q)
    elements = field.array(view.s0)
    traces = elements ** q + elements
    colors = (elements ** (q + 1)) / traces
    labels = field.sort(set(int(c) for c in colors))

    classes = []
    for label in labels:
        members = tuple(field.sort(v for v, c in zip(view.s0, colors) if int(c) == label))
        fiber = tuple(field.sort(v for v, tr in zip(view.s0, traces) if int(tr) == label))
        classes.append(ColorClass(label=label, members=members, trace_fiber=fiber))
    return classes


def color_map(q):
    """Color of every element of S_0, keyed by bitmask."""
    return {v: c.label for c in color_classes(q) for v in c.members}


def trace_map(q):
    return {v: c.label for c in color_classes(q) for v in c.trace_fiber}


def self_color_solutions(q):
    """alpha in S_0 with alpha^(2q) + alpha^2 = alpha^(q+1), i.e. Tr(alpha) equal to the color of alpha."""
    t = q.bit_length() - 1
    field = field_make(2 * t)
    elements = field.array(field.subfield(q).s0)
    hits = elements ** (2 * q) + elements ** 2 == elements ** (q + 1)
    return field.sort(elements[hits])


def self_color_exponents(q):
    """
    Generator powers g^i with i = t or 2t (mod q + 1), t = (q + 1) / 3. When
    3 does not divide q + 1 the set is empty.
    """
    t_bits = q.bit_length() - 1
    field = field_make(2 * t_bits)
    if (q + 1) % 3:
        return []
    t = (q + 1) // 3
    exponents = [i for i in range(q * q - 1) if i % (q + 1) in (t, 2 * t)]
    return field.sort(field.generator ** i for i in exponents)


# MARK: Splitting graph
class SplitGraph:
    """Directed graph on the splitting set with an edge (a, b) whenever b lifts a."""

    def __init__(self, tower, vertices, edges):
        self.tower = tower
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self._position = {v: i for i, v in enumerate(self.vertices)}
        size = len(self.vertices)
        self.adjacency = np.zeros((size, size), dtype=np.int64)
        for a, b in self.edges:
            self.adjacency[self._position[a], self._position[b]] += 1

    def out_degree(self, vertex):
        return int(self.adjacency[self._position[vertex]].sum())

    def in_degree(self, vertex):
        return int(self.adjacency[:, self._position[vertex]].sum())

    def self_loops(self):
        return [a for a, b in self.edges if a == b]

    def predecessors(self, vertex):
        return [a for a, b in self.edges if b == vertex]

    def walk_counts(self, length):
        return np.linalg.matrix_power(self.adjacency, length)

    def to_dot(self):
        field = self.tower.field
        lines = [f'digraph "{self.tower.name}" {{']
        for v in self.vertices:
            lines.append(f'  "{field.to_hex(v)}" [label="{field.to_power(v)}"];')
        for a, b in self.edges:
            lines.append(f'  "{field.to_hex(a)}" -> "{field.to_hex(b)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def split_graph(tower):
    """
    Builds the splitting graph of a tower whose lifts stay inside its
    splitting set (the GF(8) tower is the case of interest).
    """
    vertices = tower.split_base
    members = set(vertices)
    edges = []
    for a in vertices:
        for b in tower.lifts(a):
            if b not in members:
                raise StructureError(
                    f"{tower.field.to_hex(b)} lifts {tower.field.to_hex(a)} but lies outside the splitting set",
                    element=b,
                )
            edges.append((a, b))
    return SplitGraph(tower, vertices, edges)


def paths_of_length(graph, i, target):
    """
    Start vertices of directed walks of length i ending at target, with
    multiplicity.
    """
    if not 0 <= i <= lab_config.MAX_PATH_LENGTH:
        raise DomainError(f"Path length {i} is outside 0..{lab_config.MAX_PATH_LENGTH}")
    walks = graph.walk_counts(i)
    column = graph._position[int(target)]
    return Counter({v: int(walks[row, column]) for row, v in enumerate(graph.vertices) if walks[row, column]})


def connected_within(graph, length):
    """True when every ordered pair of vertices is joined by a walk of length at most `length`."""
    reach = np.zeros_like(graph.adjacency)
    for i in range(length + 1):
        reach = reach + graph.walk_counts(i)
    return bool(np.all(reach > 0))
