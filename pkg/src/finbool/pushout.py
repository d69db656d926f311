"""Push-out (amalgamated) constructions of finite Boolean algebras.

A morphism between powerset algebras is recorded by its dual action on
atoms: a map sending each atom of the codomain to an atom of the domain.
Every Boolean morphism between finite algebras arises from exactly one such
map, which keeps composition and enumeration finite and canonical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Sequence

from .core import Element, FiniteAlgebra
from .errors import AmbientMismatchError, MatchingError
from .subalgebra import SubalgebraPartition, commute, generate, intersect


@dataclass(frozen=True)
class Morphism:
    """A Boolean morphism domain -> codomain via its atom map.

    atom_map[c] is the domain atom whose image contains codomain atom c.
    """

    domain: FiniteAlgebra
    codomain: FiniteAlgebra
    atom_map: tuple[int, ...]

    def __post_init__(self):
        if len(self.atom_map) != self.codomain.atom_count:
            raise MatchingError(
                f"atom map has {len(self.atom_map)} entries for {self.codomain}"
            )
        for a in self.atom_map:
            if not 0 <= a < self.domain.atom_count:
                raise MatchingError(f"atom map entry {a} outside {self.domain}")

    def apply(self, x: Element) -> Element:
        if x.algebra != self.domain:
            raise AmbientMismatchError(f"{x!r} does not live in {self.domain}")
        mask = 0
        for c, a in enumerate(self.atom_map):
            if x.mask >> a & 1:
                mask |= 1 << c
        return Element(self.codomain, mask)

    def then(self, other: "Morphism") -> "Morphism":
        """Composite self followed by other."""
        if other.domain != self.codomain:
            raise AmbientMismatchError("morphisms do not compose")
        return Morphism(
            self.domain,
            other.codomain,
            tuple(self.atom_map[a] for a in other.atom_map),
        )

    @property
    def is_injective(self) -> bool:
        return len(set(self.atom_map)) == self.domain.atom_count


def all_morphisms(domain: FiniteAlgebra, codomain: FiniteAlgebra) -> Iterator[Morphism]:
    """Every Boolean morphism domain -> codomain, in lexicographic atom-map order."""
    for atom_map in product(range(domain.atom_count), repeat=codomain.atom_count):
        yield Morphism(domain, codomain, atom_map)


def inclusion_dual(sub: SubalgebraPartition) -> Morphism:
    """The inclusion of a subalgebra, as a morphism from its abstract algebra."""
    atom_map = tuple(sub.block_of_atom(t) for t in range(sub.algebra.atom_count))
    return Morphism(sub.as_algebra(), sub.algebra, atom_map)


@dataclass(frozen=True)
class Diagram:
    """A candidate push-out square inside one ambient algebra.

    `core` must be contained in both `left` and `right` as an element set.
    """

    ambient: FiniteAlgebra
    left: SubalgebraPartition
    right: SubalgebraPartition
    core: SubalgebraPartition

    def __post_init__(self):
        for part in (self.left, self.right, self.core):
            if part.algebra != self.ambient:
                raise AmbientMismatchError("diagram parts live in different algebras")
        if not self.left.is_refinement_of(self.core):
            raise AmbientMismatchError("core is not contained in the left subalgebra")
        if not self.right.is_refinement_of(self.core):
            raise AmbientMismatchError("core is not contained in the right subalgebra")


@dataclass(frozen=True)
class PushoutCheck:
    ok: bool
    failures: tuple[str, ...]


def verify_pushout(d: Diagram) -> PushoutCheck:
    """Check the three push-out conditions, reporting each failure.

    The square is a push-out iff left and right together generate the ambient
    algebra, intersect exactly in the core, and commute.
    """
    failures = []
    joined = intersect(d.left, d.right)
    gen_blocks = [Element(d.ambient, b) for b in d.left.blocks + d.right.blocks]
    if generate(d.ambient, gen_blocks) != SubalgebraPartition.discrete(d.ambient):
        failures.append("generate")
    if joined != d.core:
        failures.append("intersection")
    if not commute(d.left, d.right):
        failures.append("commute")
    return PushoutCheck(not failures, tuple(failures))


@dataclass(frozen=True)
class AmalgamInput:
    """Data for amalgamating two algebras over a shared core.

    The core appears as a partition on each side; `matching` identifies the
    two copies block by block: matching[i] is the right-core block glued to
    left-core block i.
    """

    left: FiniteAlgebra
    right: FiniteAlgebra
    core_in_left: SubalgebraPartition
    core_in_right: SubalgebraPartition
    matching: tuple[int, ...]

    def __post_init__(self):
        if self.core_in_left.algebra != self.left:
            raise AmbientMismatchError("left core partition is not over the left algebra")
        if self.core_in_right.algebra != self.right:
            raise AmbientMismatchError("right core partition is not over the right algebra")
        k = self.core_in_left.block_count
        if self.core_in_right.block_count != k:
            raise MatchingError(
                f"core sizes differ: {k} vs {self.core_in_right.block_count}"
            )
        if sorted(self.matching) != list(range(k)):
            raise MatchingError(f"matching {self.matching} is not a bijection on {k} blocks")


@dataclass(frozen=True)
class Amalgam:
    """Result of an amalgamation: the push-out algebra and both embeddings."""

    algebra: FiniteAlgebra
    atom_pairs: tuple[tuple[int, int], ...]
    embed_left: Morphism
    embed_right: Morphism
    source: AmalgamInput = field(repr=False)

    def diagram(self) -> Diagram:
        """The resulting square, with images taken inside the new algebra."""
        left_img = SubalgebraPartition(
            self.algebra,
            tuple(
                self.embed_left.apply(self.source.left.atom(i)).mask
                for i in range(self.source.left.atom_count)
            ),
        )
        right_img = SubalgebraPartition(
            self.algebra,
            tuple(
                self.embed_right.apply(self.source.right.atom(i)).mask
                for i in range(self.source.right.atom_count)
            ),
        )
        core_img = SubalgebraPartition(
            self.algebra,
            tuple(
                self.embed_left.apply(
                    self.source.core_in_left.block_element(i)
                ).mask
                for i in range(self.source.core_in_left.block_count)
            ),
        )
        return Diagram(self.algebra, left_img, right_img, core_img)


def amalgamate(inp: AmalgamInput) -> Amalgam:
    """The unique push-out completion of the span core -> left, core -> right.

    Atoms of the result are the pairs (left atom, right atom) whose core
    blocks are matched; each embedding picks out the pairs through one
    coordinate.
    """
    pairs = []
    for i, left_block in enumerate(inp.core_in_left.blocks):
        right_block = inp.core_in_right.blocks[inp.matching[i]]
        for a in range(inp.left.atom_count):
            if not left_block >> a & 1:
                continue
            for s in range(inp.right.atom_count):
                if right_block >> s & 1:
                    pairs.append((a, s))
    pairs.sort()
    algebra = FiniteAlgebra(len(pairs))
    embed_left = Morphism(inp.left, algebra, tuple(a for a, _ in pairs))
    embed_right = Morphism(inp.right, algebra, tuple(s for _, s in pairs))
    return Amalgam(algebra, tuple(pairs), embed_left, embed_right, inp)


def _relative_block_map(
    sub: SubalgebraPartition, core: SubalgebraPartition
) -> tuple[int, ...]:
    """For each block of `sub`, the index of the core block containing it."""
    out = []
    for b in sub.blocks:
        atom = (b & -b).bit_length() - 1
        out.append(core.block_of_atom(atom))
    return tuple(out)


def mediating_morphisms(
    d: Diagram, target: FiniteAlgebra, f: Morphism, g: Morphism
) -> list[Morphism]:
    """All h with h restricted to left = f and to right = g.

    f and g map the abstract algebras of d.left and d.right into `target`
    (atom i of the abstract algebra is block i).  For a true push-out square
    and compatible f, g the list has exactly one entry; incompatible inputs
    yield an empty list.
    """
    if f.domain != d.left.as_algebra() or g.domain != d.right.as_algebra():
        raise AmbientMismatchError("f and g must start at the diagram's side algebras")
    if f.codomain != target or g.codomain != target:
        raise AmbientMismatchError("f and g must land in the target algebra")
    left_core = _relative_block_map(d.left, d.core)
    right_core = _relative_block_map(d.right, d.core)
    for c in range(target.atom_count):
        if left_core[f.atom_map[c]] != right_core[g.atom_map[c]]:
            return []
    candidate_sets = []
    for c in range(target.atom_count):
        both = d.left.blocks[f.atom_map[c]] & d.right.blocks[g.atom_map[c]]
        candidates = [t for t in range(d.ambient.atom_count) if both >> t & 1]
        if not candidates:
            return []
        candidate_sets.append(candidates)
    return [
        Morphism(d.ambient, target, choice)
        for choice in product(*candidate_sets)
    ]
