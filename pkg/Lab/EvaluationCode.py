import functools
import itertools
import logging
import math
from dataclasses import dataclass, field as dataclass_field

import galois
import numpy as np

import lab_config
from LabErrors import (
    DomainError,
    InsufficientRepairDataError,
    LocalityUndefinedError,
    StructureError,
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


# MARK: Monomial boxes
@dataclass(frozen=True)
class MonomialBox:
    """
    Exponent bounds (E_0, ..., E_t), inclusive, over the tower coordinates
    listed in `variables` (x_0 .. x_t when omitted).
    """
    bounds: tuple
    variables: tuple = None

    def __post_init__(self):
        bounds = tuple(int(b) for b in self.bounds)
        variables = tuple(range(len(bounds))) if self.variables is None else tuple(int(v) for v in self.variables)
        if len(variables) != len(bounds):
            raise DomainError(f"Box has {len(bounds)} bounds for {len(variables)} variables")
        if any(b < 0 for b in bounds):
            raise DomainError(f"Box bounds must be non-negative, got {bounds}")
        if list(variables) != sorted(set(variables)):
            raise DomainError(f"Box variables must be distinct and increasing, got {variables}")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "variables", variables)

    @property
    def nominal_dimension(self):
        return math.prod(b + 1 for b in self.bounds)

    def bound_of(self, coordinate):
        """Largest exponent of x_coordinate, 0 when the coordinate is not a box variable."""
        if coordinate in self.variables:
            return self.bounds[self.variables.index(coordinate)]
        return 0

    def effective_variables(self):
        """Coordinates that actually occur in some monomial."""
        return tuple(v for v, b in zip(self.variables, self.bounds) if b > 0)


def monomials(box):
    """Exponent tuples of the box in lexicographic order."""
    return list(itertools.product(*(range(b + 1) for b in box.bounds)))


def evaluate(exponents, place, field, variables=None):
    """
    Value of x_{v_0}^{e_0} ... x_{v_t}^{e_t} at a place, with 0^0 = 1.

    Parameters:
        exponents (tuple[int]): one exponent per variable.
        place (Place): the place to evaluate at.
        field (FiniteField): the constant field of the tower.
        variables (tuple[int] | None): tower coordinates the exponents refer
            to; x_0, x_1, ... when omitted.
    """
    variables = tuple(range(len(exponents))) if variables is None else variables
    if len(exponents) > len(place.coords):
        raise DomainError(f"{len(exponents)} exponents for a place with {len(place.coords)} coordinates")
    value = field.one
    for v, e in zip(variables, exponents):
        if e:
            value = value * field.element(place.coords[v]) ** e
    return value


def generator_matrix(places, box):
    """One row per box monomial (lex order), one column per place (enumeration order)."""
    GF = places.field.GF
    n = len(places)
    exponents = np.array(monomials(box), dtype=np.int64).reshape(-1, len(box.bounds))
    matrix = GF.Ones((exponents.shape[0], n))
    for a, (v, bound) in enumerate(zip(box.variables, box.bounds)):
        if bound == 0:
            continue
        column = places.column(v)
        powers = [GF.Ones(n)]
        for _ in range(bound):
            powers.append(powers[-1] * column)
        table = GF(np.stack([p.view(np.ndarray) for p in powers]))
        matrix = matrix * table[exponents[:, a]]
    return matrix


def rank(matrix):
    """Row rank over the matrix's field."""
    if matrix.size == 0:
        return 0
    return int(np.linalg.matrix_rank(matrix))


def independent_rows(matrix):
    """
    Indices of the rows that are not in the span of the rows before them.

    Read off the pivot columns of the reduced row echelon form of the
    transpose, so the number of indices below p is the rank of the first p
    rows.
    """
    if matrix.size == 0:
        return ()
    reduced = matrix.T.row_reduce().view(np.ndarray)
    pivots = []
    for row in reduced:
        nonzero = np.flatnonzero(row)
        if nonzero.size == 0:
            break
        pivots.append(int(nonzero[0]))
    return tuple(pivots)


# MARK: Repair index
@dataclass(frozen=True)
class RepairIndex:
    """
    How each coordinate is recovered. In "interpolate" mode the fiber is the
    set of places sharing x_0 .. x_{j-1} and the symbol is read off a
    univariate polynomial in x_j; in "copy" mode every fiber member carries
    the same symbol.
    """
    mode: str
    key_coordinates: tuple
    fibers: tuple
    last_bound: int

    def fiber(self, position):
        return self.fibers[position]


def build_repair_index(places, box):
    """
    Behavior with Exceptions:
        LocalityUndefinedError when the bound on x_j is too large to
        interpolate on a fiber and no omitted coordinate gives a copy fiber,
        or when some place has no fiber partner.
    """
    depth = places.depth
    q_loc = places.tower.q_loc
    effective = box.effective_variables()
    last_bound = box.bound_of(depth)

    if depth not in effective:
        mode, keys = "copy", tuple(range(depth))
    elif last_bound <= q_loc - 2:
        mode, keys = "interpolate", tuple(range(depth))
    elif len(effective) < depth + 1:
        # Some earlier coordinate is absent: places agreeing on every box variable share every value.
        mode, keys = "copy", effective
    else:
        raise LocalityUndefinedError(
            f"x_{depth} has degree {last_bound} but fibers only hold {q_loc - 1} points"
        )

    groups = {}
    for place in places:
        groups.setdefault(tuple(place.coords[c] for c in keys), []).append(place.index)
    fibers = []
    for place in places:
        members = groups[tuple(place.coords[c] for c in keys)]
        fiber = tuple(i for i in members if i != place.index)
        if not fiber:
            raise LocalityUndefinedError(f"Place {place.index} has no recovery partner")
        fibers.append(fiber)
    return RepairIndex(mode=mode, key_coordinates=keys, fibers=tuple(fibers), last_bound=last_bound)


# MARK: Evaluation codes
class EvalCode:
    """
    The evaluation code C(B, V) of a monomial box V on an ordered place set B.

    The generator matrix keeps a row for every box monomial. It, the rank and
    the message basis (the first independent rows) are computed on demand.
    """

    def __init__(self, places, box, name=None, metadata=None):
        if max(box.variables, default=0) > places.depth:
            raise DomainError(f"Box uses x_{max(box.variables)} but places only reach depth {places.depth}")
        self.places = places
        self.box = box
        self.name = name or f"{places.tower.name}-d{places.depth}-{box.bounds}"
        self.metadata = dict(metadata or {})
        self.field = places.field
        self.n = len(places)
        self.k_nominal = box.nominal_dimension
        logger.info(f"Built {self.name}: n={self.n}, {self.k_nominal} monomials")

    @functools.cached_property
    def generator(self):
        return generator_matrix(self.places, self.box)

    def __repr__(self):
        return f"EvalCode({self.name!r}, n={self.n}, k_nominal={self.k_nominal})"

    @functools.cached_property
    def basis_rows(self):
        rows = independent_rows(self.generator)
        logger.info(f"Rank of {self.name} is {len(rows)} of {self.k_nominal}")
        return rows

    @property
    def rank(self):
        return len(self.basis_rows)

    @functools.cached_property
    def basis(self):
        return self.generator[list(self.basis_rows)]

    @functools.cached_property
    def repair_index(self):
        return build_repair_index(self.places, self.box)

    @property
    def tower(self):
        return self.places.tower

    @property
    def depth(self):
        return self.places.depth


def encode(code, message):
    """
    message x (row basis of the generator matrix).

    Behavior with Exceptions:
        DomainError when the message length is not the code's rank.
    """
    message = code.field.array(message) if not isinstance(message, code.field.GF) else message
    if message.shape[-1] != code.rank:
        raise DomainError(f"Message has length {message.shape[-1]}, the code has rank {code.rank}")
    return message @ code.basis


def random_message(code, rng):
    return code.field.array(rng.integers(0, code.field.size, code.rank))


def locality(code):
    """
    Largest number of symbols one repair reads.

    Behavior with Exceptions:
        LocalityUndefinedError as raised while building the repair index.
    """
    index = code.repair_index
    if index.mode == "copy":
        return 1
    return max(len(f) for f in index.fibers)


def fiber_constant(code, codeword):
    """True when every copy fiber carries a single symbol (always False for interpolation fibers)."""
    index = code.repair_index
    if index.mode != "copy":
        return False
    values = np.asarray(codeword.view(np.ndarray))
    return all(values[i] == values[j] for i, fiber in enumerate(index.fibers) for j in fiber)


@dataclass(frozen=True)
class ErasurePattern:
    """A codeword with `position` erased; `missing` lists any further erased positions."""
    codeword: object
    position: int
    missing: frozenset = dataclass_field(default_factory=frozenset)


def repair(code, pattern):
    """
    Recovers the erased symbol from its recovery fiber.

    Parameters:
        code (EvalCode): the code the codeword belongs to.
        pattern (ErasurePattern): the codeword and the erased position.

    Returns:
        FieldArray: the recovered symbol.

    Behavior with Exceptions:
        InsufficientRepairDataError when too few fiber members survive;
        StructureError when two fiber members share their x_j value.
    """
    index = code.repair_index
    position = pattern.position
    if not 0 <= position < code.n:
        raise DomainError(f"Position {position} is outside 0..{code.n - 1}")
    survivors = [i for i in index.fiber(position) if i not in pattern.missing]
    codeword = pattern.codeword

    if index.mode == "copy":
        if not survivors:
            raise InsufficientRepairDataError(f"Every recovery partner of position {position} is erased")
        return codeword[survivors[0]]

    if len(survivors) < index.last_bound + 1:
        raise InsufficientRepairDataError(
            f"Position {position} needs {index.last_bound + 1} fiber symbols, {len(survivors)} survive"
        )
    depth = code.depth
    xs = code.places.coords[survivors, depth]
    if len(set(int(x) for x in xs)) != len(survivors):
        raise StructureError(f"Fiber of position {position} repeats an x_{depth} value", depth=depth)
    poly = galois.lagrange_poly(code.field.array(xs), codeword[survivors])
    return poly(code.field.element(code.places.coords[position, depth]))


@dataclass
class LocalityCheck:
    codewords: int = 0
    repairs: int = 0
    violation: tuple = None

    @property
    def ok(self):
        return self.violation is None


def verify_locality(code, samples=lab_config.REPAIR_SAMPLES, seed=0, positions_per_sample=None):
    """
    Re-derives, for seeded random codewords, that each coordinate equals the
    repair of its fiber. Stops at the first violation, reported as
    (sample, position).
    """
    rng = np.random.default_rng(seed)
    check = LocalityCheck()
    for sample in range(samples):
        codeword = encode(code, random_message(code, rng))
        check.codewords += 1
        if positions_per_sample is None:
            positions = range(code.n)
        else:
            positions = rng.choice(code.n, size=min(positions_per_sample, code.n), replace=False)
        for position in positions:
            position = int(position)
            check.repairs += 1
            if repair(code, ErasurePattern(codeword, position)) != codeword[position]:
                check.violation = (sample, position)
                logger.error(f"Repair of position {position} failed on sample {sample} of {code.name}")
                return check
    return check
