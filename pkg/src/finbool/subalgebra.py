"""Subalgebras of a finite algebra, encoded as partitions of its atoms.

A subalgebra of a powerset algebra is determined by the partition of the
atoms into its minimal nonzero elements; its element set is exactly the set
of unions of blocks.  Membership tests are linear in the block count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import ENUMERATION_LIMIT, Element, FiniteAlgebra
from .errors import AmbientMismatchError, FinboolError, OrderError, SizeLimitError


@dataclass(frozen=True)
class SubalgebraPartition:
    """A subalgebra given by its atom partition.

    Blocks are bitmasks, pairwise disjoint and covering the ambient atoms;
    they are stored sorted by lowest atom, so equal subalgebras compare equal.
    """

    algebra: FiniteAlgebra
    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(sorted(self.blocks, key=lambda b: b & -b))
        object.__setattr__(self, "blocks", blocks)
        union = 0
        for b in blocks:
            if b == 0:
                raise FinboolError("empty block in partition")
            if b & union:
                raise FinboolError("overlapping blocks in partition")
            union |= b
        if union != self.algebra.universe_mask:
            raise FinboolError("blocks do not cover all atoms")

    @classmethod
    def from_blocks(
        cls, algebra: FiniteAlgebra, blocks: Iterable[Iterable[int]]
    ) -> "SubalgebraPartition":
        return cls(algebra, tuple(algebra.element(b).mask for b in blocks))

    @classmethod
    def trivial(cls, algebra: FiniteAlgebra) -> "SubalgebraPartition":
        return cls(algebra, (algebra.universe_mask,))

    @classmethod
    def discrete(cls, algebra: FiniteAlgebra) -> "SubalgebraPartition":
        return cls(algebra, tuple(1 << i for i in range(algebra.atom_count)))

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def block_of_atom(self, atom: int) -> int:
        """Index of the block containing the given atom."""
        for i, b in enumerate(self.blocks):
            if b >> atom & 1:
                return i
        raise FinboolError(f"atom {atom} not covered")

    def block_element(self, i: int) -> Element:
        return Element(self.algebra, self.blocks[i])

    def contains(self, a: Element) -> bool:
        """Whether `a` belongs to the subalgebra (is a union of blocks)."""
        if a.algebra != self.algebra:
            raise AmbientMismatchError(f"{a!r} does not live in {self.algebra}")
        return all(a.mask & b in (0, b) for b in self.blocks)

    def elements(self) -> Iterator[Element]:
        """All 2^block_count elements, ordered by block subset mask."""
        if (1 << self.block_count) > ENUMERATION_LIMIT:
            raise SizeLimitError(f"refusing to enumerate 2^{self.block_count} elements")
        for subset in range(1 << self.block_count):
            mask = 0
            for i in range(self.block_count):
                if subset >> i & 1:
                    mask |= self.blocks[i]
            yield Element(self.algebra, mask)

    def as_algebra(self) -> FiniteAlgebra:
        """The abstract algebra whose atom i is block i."""
        return FiniteAlgebra(self.block_count)

    def is_refinement_of(self, coarser: "SubalgebraPartition") -> bool:
        """True iff every block of `coarser` is a union of our blocks.

        Equivalently, `coarser`'s element set is contained in ours.
        """
        self._check(coarser)
        return all(self.contains(Element(self.algebra, b)) for b in coarser.blocks)

    def _check(self, other: "SubalgebraPartition") -> None:
        if self.algebra != other.algebra:
            raise AmbientMismatchError(
                f"subalgebras of {self.algebra} and {other.algebra} cannot be combined"
            )


def generate(algebra: FiniteAlgebra, gens: Sequence[Element]) -> SubalgebraPartition:
    """Smallest subalgebra containing the generators.

    Partition refinement: blocks are the nonempty intersections of the
    generators and their complements over all sign patterns.
    """
    blocks = [algebra.universe_mask]
    for g in gens:
        if g.algebra != algebra:
            raise AmbientMismatchError(f"generator {g!r} does not live in {algebra}")
        split = []
        for b in blocks:
            inside = b & g.mask
            outside = b & ~g.mask
            if inside:
                split.append(inside)
            if outside:
                split.append(outside)
        blocks = split
    return SubalgebraPartition(algebra, tuple(blocks))


def intersect(s1: SubalgebraPartition, s2: SubalgebraPartition) -> SubalgebraPartition:
    """The subalgebra whose element set is the intersection of the two.

    Its blocks are the connected components of the atom graph in which each
    block of either partition is a clique (the join in the partition lattice).
    """
    s1._check(s2)
    n = s1.algebra.atom_count
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for part in (s1, s2):
        for b in part.blocks:
            first = (b & -b).bit_length() - 1
            for t in range(first + 1, n):
                if b >> t & 1:
                    union(first, t)
    groups: dict[int, int] = {}
    for t in range(n):
        groups[find(t)] = groups.get(find(t), 0) | (1 << t)
    return SubalgebraPartition(s1.algebra, tuple(groups.values()))


def upper_approx(r: SubalgebraPartition, a: Element) -> Element:
    """Least element of the subalgebra above `a`: union of blocks meeting it."""
    if a.algebra != r.algebra:
        raise AmbientMismatchError(f"{a!r} does not live in {r.algebra}")
    mask = 0
    for b in r.blocks:
        if b & a.mask:
            mask |= b
    return Element(r.algebra, mask)


def lower_approx(r: SubalgebraPartition, a: Element) -> Element:
    """Greatest element of the subalgebra below `a`: union of blocks inside it."""
    if a.algebra != r.algebra:
        raise AmbientMismatchError(f"{a!r} does not live in {r.algebra}")
    mask = 0
    for b in r.blocks:
        if b & a.mask == b:
            mask |= b
    return Element(r.algebra, mask)


def interpolate(r: SubalgebraPartition, c1: Element, c2: Element) -> Element | None:
    """Canonical interpolant c1 <= r <= c2 in the subalgebra, if one exists.

    Uses the least candidate, upper_approx(r, c1): any interpolant lies above
    it, so it works whenever anything does.
    """
    if not c1 <= c2:
        raise OrderError(f"{c1!r} is not below {c2!r}")
    candidate = upper_approx(r, c1)
    return candidate if candidate <= c2 else None


def commute(s1: SubalgebraPartition, s2: SubalgebraPartition) -> bool:
    """Whether the two subalgebras commute.

    Disjoint pairs a1 in s1, a2 in s2 must separate through disjoint elements
    of the intersection subalgebra; equivalently every c1 <= c2 across the two
    interpolates through it.  Both reduce to a block condition: within each
    block of the intersection partition, every s1 block must meet every s2
    block.  (Failures at general elements always restrict to single blocks.)
    """
    s1._check(s2)
    meet = intersect(s1, s2)
    for d in meet.blocks:
        ones = [b for b in s1.blocks if b & d]
        twos = [b for b in s2.blocks if b & d]
        for b1 in ones:
            for b2 in twos:
                if not b1 & b2:
                    return False
    return True


def pushforward(sub: SubalgebraPartition, morphism) -> SubalgebraPartition:
    """Image of a subalgebra along an injective morphism of its ambient algebra."""
    if morphism.domain != sub.algebra:
        raise AmbientMismatchError("morphism domain does not match subalgebra ambient")
    blocks = tuple(
        morphism.apply(Element(sub.algebra, b)).mask for b in sub.blocks
    )
    return SubalgebraPartition(morphism.codomain, blocks)


def restrict(
    sub: SubalgebraPartition, ambient: SubalgebraPartition
) -> SubalgebraPartition:
    """Re-express `sub` as a partition of `ambient`'s blocks.

    Requires sub's element set to be contained in ambient's; the result lives
    over ambient.as_algebra(), whose atom i is ambient block i.
    """
    sub._check(ambient)
    small = ambient.as_algebra()
    index_blocks: dict[int, int] = {}
    for j, b in enumerate(ambient.blocks):
        atom = (b & -b).bit_length() - 1
        owner = None
        for i, big in enumerate(sub.blocks):
            if big >> atom & 1:
                owner = i
                if b & ~big:
                    raise FinboolError(
                        "ambient block straddles the subalgebra; containment fails"
                    )
                break
        index_blocks[owner] = index_blocks.get(owner, 0) | (1 << j)
    return SubalgebraPartition(small, tuple(index_blocks.values()))
