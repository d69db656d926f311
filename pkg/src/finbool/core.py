"""Finite Boolean algebras as powersets of atoms, plus truth-table polynomials.

An algebra with n atoms is the powerset of {0, ..., n-1}; an element is the
set of atoms below it, stored as a bitmask.  A polynomial in n variables is
its truth table over the 2^n sign assignments, so two polynomials are equal
as functions on every Boolean algebra exactly when their tables coincide.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import (
    AmbientMismatchError,
    ArityMismatchError,
    InvalidIndexError,
    SizeLimitError,
)

DEFAULT_MAX_ATOMS = 24
MAX_ATOMS_ENV = "FINBOOL_MAX_ATOMS"

# Enumerating every element of an algebra or subalgebra is only sensible at
# desk scale; iterators refuse beyond this many elements.
ENUMERATION_LIMIT = 1 << 20

_max_atoms_override: int | None = None


def atom_limit() -> int:
    """Largest atom count new algebras may have."""
    if _max_atoms_override is not None:
        return _max_atoms_override
    env = os.environ.get(MAX_ATOMS_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            return DEFAULT_MAX_ATOMS
    return DEFAULT_MAX_ATOMS


def set_atom_limit(limit: int | None) -> None:
    """Override the atom-count bound (None restores env/default behaviour)."""
    global _max_atoms_override
    if limit is not None and limit < 1:
        raise SizeLimitError(f"atom limit must be >= 1, got {limit}")
    _max_atoms_override = limit


@dataclass(frozen=True)
class FiniteAlgebra:
    """The powerset algebra on `atom_count` atoms."""

    atom_count: int

    def __post_init__(self):
        if self.atom_count < 1:
            raise SizeLimitError(f"atom_count must be >= 1, got {self.atom_count}")
        if self.atom_count > atom_limit():
            raise SizeLimitError(
                f"atom_count {self.atom_count} exceeds the configured limit {atom_limit()}"
            )

    @property
    def universe_mask(self) -> int:
        return (1 << self.atom_count) - 1

    @property
    def zero(self) -> "Element":
        return Element(self, 0)

    @property
    def one(self) -> "Element":
        return Element(self, self.universe_mask)

    def atom(self, i: int) -> "Element":
        if not 0 <= i < self.atom_count:
            raise InvalidIndexError(f"atom index {i} out of range for {self}")
        return Element(self, 1 << i)

    def element(self, atoms: Iterable[int]) -> "Element":
        mask = 0
        for i in atoms:
            if not 0 <= i < self.atom_count:
                raise InvalidIndexError(f"atom index {i} out of range for {self}")
            mask |= 1 << i
        return Element(self, mask)

    def from_mask(self, mask: int) -> "Element":
        return Element(self, mask)

    def elements(self) -> Iterator["Element"]:
        """All 2^atom_count elements, in mask order."""
        if (1 << self.atom_count) > ENUMERATION_LIMIT:
            raise SizeLimitError(
                f"refusing to enumerate 2^{self.atom_count} elements"
            )
        for mask in range(1 << self.atom_count):
            yield Element(self, mask)

    def __repr__(self) -> str:
        return f"FiniteAlgebra({self.atom_count})"


@dataclass(frozen=True)
class Element:
    """An element of a FiniteAlgebra: the set of atoms below it."""

    algebra: FiniteAlgebra
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= self.algebra.universe_mask:
            raise InvalidIndexError(
                f"mask {self.mask:#x} uses atoms outside {self.algebra}"
            )

    @property
    def atoms(self) -> frozenset[int]:
        return frozenset(i for i in range(self.algebra.atom_count) if self.mask >> i & 1)

    def _check(self, other: "Element") -> None:
        if self.algebra != other.algebra:
            raise AmbientMismatchError(
                f"elements of {self.algebra} and {other.algebra} cannot be combined"
            )

    def __and__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.mask & other.mask)

    def __or__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.mask | other.mask)

    def __xor__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.mask ^ other.mask)

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.mask & ~other.mask)

    def __invert__(self) -> "Element":
        return Element(self.algebra, self.algebra.universe_mask & ~self.mask)

    def __le__(self, other: "Element") -> bool:
        return leq(self, other)

    def __ge__(self, other: "Element") -> bool:
        return leq(other, self)

    @property
    def is_zero(self) -> bool:
        return self.mask == 0

    @property
    def is_one(self) -> bool:
        return self.mask == self.algebra.universe_mask

    def __repr__(self) -> str:
        inside = "{" + ",".join(map(str, sorted(self.atoms))) + "}"
        return f"Element({inside} of {self.algebra.atom_count})"


def leq(a: Element, b: Element) -> bool:
    """Order test: a <= b iff a & ~b = 0 iff atoms(a) is a subset of atoms(b)."""
    a._check(b)
    return a.mask & ~b.mask == 0


# Guard against accidentally huge truth tables; 2^16 rows is already far
# beyond anything the sign-enumeration operations can use.
MAX_ARITY = 16


@dataclass(frozen=True)
class BoolPoly:
    """A Boolean polynomial as a truth table.

    Bit m of `table` is the value on the assignment where variable x_{j+1}
    takes bit j of m.  Arity 0 polynomials are the constants.
    """

    arity: int
    table: int

    def __post_init__(self):
        if not 0 <= self.arity <= MAX_ARITY:
            raise ArityMismatchError(f"arity must be in [0, {MAX_ARITY}], got {self.arity}")
        if not 0 <= self.table < (1 << (1 << self.arity)):
            raise ArityMismatchError(
                f"table {self.table:#x} does not fit 2^{self.arity} rows"
            )

    @property
    def rows(self) -> int:
        return 1 << self.arity

    @property
    def table_mask(self) -> int:
        return (1 << self.rows) - 1

    @classmethod
    def constant(cls, arity: int, value: int) -> "BoolPoly":
        table = ((1 << (1 << arity)) - 1) if value else 0
        return cls(arity, table)

    @classmethod
    def variable(cls, arity: int, k: int) -> "BoolPoly":
        """The projection onto variable x_k (1-based)."""
        if not 1 <= k <= arity:
            raise InvalidIndexError(f"variable index {k} out of range for arity {arity}")
        j = k - 1
        table = 0
        for m in range(1 << arity):
            if m >> j & 1:
                table |= 1 << m
        return cls(arity, table)

    def _check(self, other: "BoolPoly") -> None:
        if self.arity != other.arity:
            raise ArityMismatchError(
                f"cannot combine polynomials of arity {self.arity} and {other.arity}"
            )

    def __and__(self, other: "BoolPoly") -> "BoolPoly":
        self._check(other)
        return BoolPoly(self.arity, self.table & other.table)

    def __or__(self, other: "BoolPoly") -> "BoolPoly":
        self._check(other)
        return BoolPoly(self.arity, self.table | other.table)

    def __xor__(self, other: "BoolPoly") -> "BoolPoly":
        self._check(other)
        return BoolPoly(self.arity, self.table ^ other.table)

    def __invert__(self) -> "BoolPoly":
        return BoolPoly(self.arity, self.table_mask & ~self.table)

    def value_at(self, assignment: int) -> int:
        """Value on a 0/1 assignment given as a bitmask of variable values."""
        if not 0 <= assignment < self.rows:
            raise InvalidIndexError(f"assignment {assignment} out of range")
        return self.table >> assignment & 1

    def cofactor(self, k: int, value: int) -> "BoolPoly":
        """Substitute the constant `value` for x_k (1-based); arity drops by one."""
        if not 1 <= k <= self.arity:
            raise InvalidIndexError(f"variable index {k} out of range for arity {self.arity}")
        j = k - 1
        low_mask = (1 << j) - 1
        table = 0
        for m in range(1 << (self.arity - 1)):
            full = (m & low_mask) | ((value & 1) << j) | ((m & ~low_mask) << 1)
            if self.table >> full & 1:
                table |= 1 << m
        return BoolPoly(self.arity - 1, table)

    def __repr__(self) -> str:
        return f"BoolPoly(arity={self.arity}, table={self.table:#x})"


def polys_equal(p: BoolPoly, q: BoolPoly) -> bool:
    """Table identity; equivalent to equality as functions on every algebra."""
    if p.arity != q.arity:
        raise ArityMismatchError(
            f"cannot compare polynomials of arity {p.arity} and {q.arity}"
        )
    return p.table == q.table


def eval_poly(p: BoolPoly, args: Sequence[Element], algebra: FiniteAlgebra) -> Element:
    """Evaluate p on elements of `algebra`.

    Pointwise over atoms: an atom lands in the result exactly when the row of
    the truth table selected by the argument masks at that atom is 1.  This
    agrees with the disjunction over minterms of the table.
    """
    if len(args) != p.arity:
        raise ArityMismatchError(f"expected {p.arity} arguments, got {len(args)}")
    for a in args:
        if a.algebra != algebra:
            raise AmbientMismatchError(f"argument {a!r} does not live in {algebra}")
    mask = 0
    for t in range(algebra.atom_count):
        row = 0
        for j, a in enumerate(args):
            row |= (a.mask >> t & 1) << j
        if p.table >> row & 1:
            mask |= 1 << t
    return Element(algebra, mask)
