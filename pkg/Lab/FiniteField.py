import sys
import os
import logging
import functools
from dataclasses import dataclass

import galois
import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from proto import lab_pb2
import lab_config
from LabErrors import (
    DivisionByZeroError,
    DomainError,
    FieldConstructionError,
    FieldMismatchError,
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

GF2 = galois.GF(2)

# Every FieldArray class built through field_make, mapped back to its wrapper.
_FIELDS_BY_CLASS = {}


# MARK: FiniteField
class FiniteField:
    """
    GF(2^m) in the polynomial basis of a fixed irreducible modulus.

    Elements are 0-d galois FieldArrays; their integer value is the bitmask of
    polynomial-basis coefficients, so addition is XOR of bitmasks. Every
    enumeration in the lab lists elements as 0, g^0, g^1, ..., g^(2^m - 2) for
    the generator g, the smallest primitive element of the field.
    """

    def __init__(self, m, modulus_poly):
        self.m = m
        self.size = 2 ** m
        mode = "jit-lookup" if m <= lab_config.EAGER_TABLE_DEGREE else "jit-calculate"
        if m == 1:
            self.GF = galois.GF(2, compile=mode)
        else:
            self.GF = galois.GF(2 ** m, irreducible_poly=modulus_poly, compile=mode)
        self.modulus = int(modulus_poly)
        self.generator = self.GF.primitive_element

        # rank(0) = 0, rank(g^k) = k + 1
        nonzero = self.GF.Range(1, self.size)
        self._rank = np.zeros(self.size, dtype=np.int64)
        self._rank[1:] = np.asarray(nonzero.log(self.generator), dtype=np.int64) + 1
        self._ordered = np.argsort(self._rank)

    def __repr__(self):
        return f"FiniteField(m={self.m}, modulus={self.modulus:#x})"

    # MARK: Elements
    def element(self, value):
        return self.GF(int(value))

    def array(self, values):
        return self.GF(np.asarray(values, dtype=np.int64))

    @property
    def zero(self):
        return self.GF(0)

    @property
    def one(self):
        return self.GF(1)

    def ordered_elements(self):
        """All elements in generator-power order: 0, g^0, g^1, ..."""
        return self.GF(self._ordered)

    def ordered_ints(self):
        return [int(v) for v in self._ordered]

    def order_key(self, value):
        """Rank of an element (or its bitmask) in generator-power order."""
        return int(self._rank[int(value)])

    def sort(self, values):
        return sorted((int(v) for v in values), key=self.order_key)

    # MARK: Element I/O
    def to_hex(self, value):
        width = max(1, (self.m + 3) // 4)
        return f"0x{int(value):0{width}x}"

    def from_hex(self, text):
        value = int(text, 16)
        if value >= self.size:
            raise DomainError(f"{text} does not fit in GF(2^{self.m})")
        return self.GF(value)

    def to_power(self, value):
        value = int(value)
        if value == 0:
            return "0"
        return f"g^{self.order_key(value) - 1}"

    def from_power(self, text):
        text = text.strip()
        if text == "0":
            return self.zero
        if not text.startswith("g^"):
            raise DomainError(f"Expected '0' or 'g^k', got {text!r}")
        return self.generator ** (int(text[2:]) % (self.size - 1))

    def describe(self):
        return lab_pb2.FieldDescription(
            schema_version=lab_config.SCHEMA_VERSION,
            m=self.m,
            modulus_bits=self.modulus,
            generator_bits=int(self.generator),
        )

    # MARK: Subfields
    def _check_subfield(self, q):
        t = q.bit_length() - 1
        if q < 2 or q != 1 << t or self.m % t != 0:
            raise DomainError(f"GF({q}) is not a subfield of GF(2^{self.m})")
        return t

    def subfield(self, q):
        """The copy of GF(q) inside this field, realised as the fixed set of x -> x^q."""
        self._check_subfield(q)
        everything = self.GF.elements
        fixed = everything[everything ** q == everything]
        embedding = frozenset(int(v) for v in fixed)
        outside = tuple(v for v in self.ordered_ints() if v not in embedding)
        return SubfieldView(big=self, q=q, embedding=embedding, s0=outside)

    def _require_square(self, q, beta):
        if type(beta) is not self.GF:
            raise FieldMismatchError(f"{beta!r} does not belong to {self!r}")
        if q * q != self.size:
            raise DomainError(f"Trace and norm to GF({q}) need a field of size {q * q}, not {self.size}")

    def trace_to(self, q, beta):
        """Tr(beta) = beta^q + beta, valued in GF(q)."""
        self._require_square(q, beta)
        return beta ** q + beta

    def norm_to(self, q, beta):
        """N(beta) = beta^(q+1), valued in GF(q)."""
        self._require_square(q, beta)
        return beta ** (q + 1)

    # MARK: Additive polynomials
    def linearized_roots(self, q_loc, rhs):
        """
        Solves gamma^q_loc + gamma = rhs over the field.

        The map L(gamma) = gamma^q_loc + gamma is tabulated once over the whole
        field and sorted by image, so each call is a binary search. The roots
        are empty or a coset of the kernel GF(q_loc).

        Parameters:
            q_loc (int): a power of two whose exponent divides m.
            rhs (FieldArray): the right-hand side, an element of this field.

        Returns:
            list[int]: all roots as bitmasks, in generator-power order.
        """
        if type(rhs) is not self.GF:
            raise FieldMismatchError(f"{rhs!r} does not belong to {self!r}")
        self._check_subfield(q_loc)
        images, preimages = self._additive_table(q_loc)
        value = int(rhs)
        lo, hi = np.searchsorted(images, value, side="left"), np.searchsorted(images, value, side="right")
        return self.sort(preimages[lo:hi])

    @functools.lru_cache(maxsize=None)
    def _additive_table(self, q_loc):
        """Sorted images of L over every element, with the element behind each image."""
        everything = self.GF.elements
        images = (everything ** q_loc + everything).view(np.ndarray)
        order = np.argsort(images, kind="stable")
        return images[order], order


@dataclass(frozen=True)
class SubfieldView:
    big: FiniteField
    q: int
    embedding: frozenset
    s0: tuple

    def contains(self, value):
        return int(value) in self.embedding


# MARK: Construction
def field_make(m, modulus=None):
    """
    Builds GF(2^m).

    Parameters:
        m (int): extension degree over GF(2), 1 <= m <= 20.
        modulus (int | None): bitmask of a degree-m polynomial over GF(2). When
            omitted the lexicographically smallest irreducible polynomial of
            degree m is used.

    Returns:
        FiniteField

    Behavior with Exceptions:
        FieldConstructionError when m is out of range, when the modulus has the
        wrong degree, or when it is reducible (the error names a factor).
    """
    if not 1 <= m <= lab_config.MAX_FIELD_DEGREE:
        raise FieldConstructionError(f"Extension degree {m} is outside 1..{lab_config.MAX_FIELD_DEGREE}")
    if modulus is None:
        poly = galois.irreducible_poly(2, m, method="min")
    else:
        poly = galois.Poly.Int(modulus, field=GF2)
        if poly.degree != m:
            raise FieldConstructionError(f"Modulus {poly} has degree {poly.degree}, expected {m}")
        if not poly.is_irreducible():
            factors, _ = poly.factors()
            factor = factors[0]
            raise FieldConstructionError(f"Modulus {poly} is reducible: {factor} divides it", factor=int(factor))
    return _build_field(m, int(poly))


@functools.lru_cache(maxsize=None)
def _build_field(m, modulus):
    poly = galois.Poly.Int(modulus, field=GF2)
    field = FiniteField(m, poly)
    _FIELDS_BY_CLASS[field.GF] = field
    logger.info(f"Built GF(2^{m}) with modulus {poly} and generator {field.to_hex(field.generator)}")
    return field


def field_of(element):
    field = _FIELDS_BY_CLASS.get(type(element))
    if field is None:
        raise FieldMismatchError(f"{element!r} was not built by field_make")
    return field


# MARK: Arithmetic
def _same_field(a, b):
    if type(a) is not type(b):
        raise FieldMismatchError(f"Cannot combine elements of {type(a).name} and {type(b).name}")


def add(a, b):
    _same_field(a, b)
    return a + b


def mul(a, b):
    _same_field(a, b)
    return a * b


def inv(a):
    if int(a) == 0:
        raise DivisionByZeroError("0 has no multiplicative inverse")
    return type(a)(1) / a


def power(a, e):
    """a^e; galois evaluates integer powers by square-and-multiply."""
    if e < 0:
        return inv(a) ** (-e)
    return a ** e


def trace_to(q, beta):
    return field_of(beta).trace_to(q, beta)


def norm_to(q, beta):
    return field_of(beta).norm_to(q, beta)


def linearized_roots(field, q_loc, rhs):
    return field.linearized_roots(q_loc, rhs)
