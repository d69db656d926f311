"""Finite tight filtrations built from successive push-out steps.

A filtration starts at the two-element algebra and grows by amalgamation: at
each step a core subalgebra of the current stage is glued to an external side
algebra containing a copy of it.  Index sets select side algebras; the
subalgebra they generate in the final stage is the skeleton of the index set.
Saturated index sets (each step's core already generated by earlier selected
sides) are the ones whose skeletons interact by push-out squares, and they
support the interval solver for Boolean equations over separated skeletons.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .core import BoolPoly, Element, FiniteAlgebra, atom_limit, eval_poly
from .elimination import all_signs_vanish, eliminate
from .errors import (
    ArityMismatchError,
    InvalidIndexError,
    PreconditionError,
    SizeLimitError,
)
from .pushout import AmalgamInput, Diagram, Morphism, PushoutCheck, amalgamate, verify_pushout
from .subalgebra import (
    SubalgebraPartition,
    generate,
    lower_approx,
    pushforward,
    restrict,
    upper_approx,
)


@dataclass(frozen=True)
class StepSpec:
    """Build instructions for one filtration step.

    Blocks follow the canonical order (sorted by least atom); matching[i] is
    the side-core block glued to core block i.  Use `make` to canonicalize
    blocks given in any order.
    """

    core_blocks: tuple[tuple[int, ...], ...]
    side_atoms: int
    side_core_blocks: tuple[tuple[int, ...], ...]
    matching: tuple[int, ...]

    @classmethod
    def make(
        cls,
        core_blocks: Sequence[Iterable[int]],
        side_atoms: int,
        side_core_blocks: Sequence[Iterable[int]],
        matching: Sequence[int],
    ) -> "StepSpec":
        core = [tuple(sorted(b)) for b in core_blocks]
        side = [tuple(sorted(b)) for b in side_core_blocks]
        left_order = sorted(range(len(core)), key=lambda i: core[i][0] if core[i] else -1)
        right_order = sorted(range(len(side)), key=lambda i: side[i][0] if side[i] else -1)
        right_rank = {orig: pos for pos, orig in enumerate(right_order)}
        canon_matching = [0] * len(core)
        for pos, orig in enumerate(left_order):
            canon_matching[pos] = right_rank[matching[orig]]
        return cls(
            tuple(core[i] for i in left_order),
            side_atoms,
            tuple(side[i] for i in right_order),
            tuple(canon_matching),
        )


@dataclass(frozen=True)
class FiltrationStep:
    """One realized step: the stage it extended and how it was glued."""

    before: FiniteAlgebra
    core: SubalgebraPartition
    side: FiniteAlgebra
    core_in_side: SubalgebraPartition
    matching: tuple[int, ...]
    embedding: Morphism
    side_embedding: Morphism
    support: tuple[int, ...]


@dataclass(frozen=True)
class Filtration:
    """A finished filtration with all images transported to the final stage."""

    steps: tuple[FiltrationStep, ...]
    final: FiniteAlgebra
    stage_images: tuple[SubalgebraPartition, ...]
    side_images: tuple[SubalgebraPartition, ...]
    core_images: tuple[SubalgebraPartition, ...]
    _skeletons: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.steps)

    def check_indices(self, indices: Iterable[int]) -> frozenset[int]:
        out = frozenset(indices)
        for i in out:
            if not 0 <= i < len(self.steps):
                raise InvalidIndexError(f"step index {i} out of range for length {len(self.steps)}")
        return out

    def step_spec(self, alpha: int) -> StepSpec:
        """The build instructions that produced step alpha."""
        s = self.steps[alpha]
        return StepSpec(
            tuple(tuple(sorted(s.core.block_element(i).atoms)) for i in range(s.core.block_count)),
            s.side.atom_count,
            tuple(
                tuple(sorted(s.core_in_side.block_element(i).atoms))
                for i in range(s.core_in_side.block_count)
            ),
            s.matching,
        )


def predicted_atom_count(inp: AmalgamInput) -> int:
    """Atom count of the amalgam, computed without building it."""
    total = 0
    for i, left_block in enumerate(inp.core_in_left.blocks):
        right_block = inp.core_in_right.blocks[inp.matching[i]]
        total += bin(left_block).count("1") * bin(right_block).count("1")
    return total


def _skeleton_in(
    algebra: FiniteAlgebra, side_imgs: Sequence[SubalgebraPartition], indices: Iterable[int]
) -> SubalgebraPartition:
    gens = [
        Element(algebra, b)
        for i in sorted(set(indices))
        for b in side_imgs[i].blocks
    ]
    return generate(algebra, gens)


def _greedy_support(
    algebra: FiniteAlgebra,
    side_imgs: Sequence[SubalgebraPartition],
    targets: Sequence[Element],
    upto: int,
) -> tuple[int, ...]:
    """Inclusion-minimal subset of range(upto) whose skeleton contains the targets.

    Indices are dropped greedily from the top, which is deterministic and
    keeps supports pointing at the steps that actually created the targets.
    """
    keep = list(range(upto))

    def covered(indices: Sequence[int]) -> bool:
        sk = _skeleton_in(algebra, side_imgs, indices)
        return all(sk.contains(t) for t in targets)

    if not covered(keep):
        raise PreconditionError("targets are not generated by the earlier steps")
    for i in reversed(range(upto)):
        trial = [j for j in keep if j != i]
        if covered(trial):
            keep = trial
    return tuple(keep)


def build_filtration(
    schedule: Sequence[StepSpec], max_atoms: int | None = None
) -> Filtration:
    """Run a schedule of push-out steps, starting from the two-element algebra.

    Rejects (with the step index) any step that would push the atom count of
    the next stage over the bound.
    """
    bound = max_atoms if max_atoms is not None else atom_limit()
    current = FiniteAlgebra(1)
    stage_imgs: list[SubalgebraPartition] = [SubalgebraPartition.discrete(current)]
    side_imgs: list[SubalgebraPartition] = []
    core_imgs: list[SubalgebraPartition] = []
    steps: list[FiltrationStep] = []
    for alpha, spec in enumerate(schedule):
        core = SubalgebraPartition.from_blocks(current, spec.core_blocks)
        side = FiniteAlgebra(spec.side_atoms)
        core_in_side = SubalgebraPartition.from_blocks(side, spec.side_core_blocks)
        inp = AmalgamInput(current, side, core, core_in_side, spec.matching)
        grown = predicted_atom_count(inp)
        if grown > bound:
            raise SizeLimitError(
                f"step {alpha} would grow the algebra to {grown} atoms (bound {bound})"
            )
        support = _greedy_support(
            current,
            side_imgs,
            [core.block_element(i) for i in range(core.block_count)],
            alpha,
        )
        am = amalgamate(inp)
        stage_imgs = [pushforward(p, am.embed_left) for p in stage_imgs]
        side_imgs = [pushforward(p, am.embed_left) for p in side_imgs]
        core_imgs = [pushforward(p, am.embed_left) for p in core_imgs]
        core_imgs.append(pushforward(core, am.embed_left))
        side_imgs.append(
            pushforward(SubalgebraPartition.discrete(side), am.embed_right)
        )
        stage_imgs.append(SubalgebraPartition.discrete(am.algebra))
        steps.append(
            FiltrationStep(
                before=current,
                core=core,
                side=side,
                core_in_side=core_in_side,
                matching=inp.matching,
                embedding=am.embed_left,
                side_embedding=am.embed_right,
                support=support,
            )
        )
        current = am.algebra
    return Filtration(
        tuple(steps), current, tuple(stage_imgs), tuple(side_imgs), tuple(core_imgs)
    )


def free_schedule(length: int) -> list[StepSpec]:
    """Steps that attach a fresh free generator each time (trivial cores)."""
    specs = []
    atoms = 1
    for _ in range(length):
        specs.append(StepSpec((tuple(range(atoms)),), 2, ((0, 1),), (0,)))
        atoms *= 2
    return specs


def random_schedule(
    seed: int | random.Random,
    length: int,
    max_side_atoms: int = 3,
    max_atoms: int | None = None,
) -> list[StepSpec]:
    """A seeded schedule whose steps respect the atom bound.

    Oversized draws are retried; if a step keeps overflowing, a no-growth step
    (side equal to a trivial core) is used so the requested length is kept.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    bound = max_atoms if max_atoms is not None else atom_limit()
    specs: list[StepSpec] = []
    atoms = 1
    for _ in range(length):
        chosen = None
        for _attempt in range(30):
            k = rng.randint(1, min(atoms, max_side_atoms))
            order = list(range(atoms))
            rng.shuffle(order)
            cuts = sorted(rng.sample(range(1, atoms), k - 1)) if k > 1 else []
            core_blocks = []
            prev = 0
            for cut in cuts + [atoms]:
                core_blocks.append(tuple(sorted(order[prev:cut])))
                prev = cut
            side_atoms = rng.randint(k, max_side_atoms)
            owners = list(range(k)) + [rng.randrange(k) for _ in range(side_atoms - k)]
            rng.shuffle(owners)
            side_blocks: dict[int, list[int]] = {}
            for atom, owner in enumerate(owners):
                side_blocks.setdefault(owner, []).append(atom)
            side_core_blocks = [tuple(b) for b in side_blocks.values()]
            matching = list(range(k))
            rng.shuffle(matching)
            spec = StepSpec.make(core_blocks, side_atoms, side_core_blocks, matching)
            grown = 0
            for i, cb in enumerate(spec.core_blocks):
                grown += len(cb) * len(spec.side_core_blocks[spec.matching[i]])
            if grown <= bound:
                chosen = spec
                atoms = grown
                break
        if chosen is None:
            chosen = StepSpec((tuple(range(atoms)),), 1, ((0,),), (0,))
        specs.append(chosen)
    return specs


def skeleton(f: Filtration, indices: Iterable[int]) -> SubalgebraPartition:
    """Subalgebra of the final stage generated by the selected side algebras."""
    key = f.check_indices(indices)
    cached = f._skeletons.get(key)
    if cached is None:
        cached = _skeleton_in(f.final, f.side_images, key)
        f._skeletons[key] = cached
    return cached


def is_saturated(f: Filtration, indices: Iterable[int]) -> bool:
    """Whether each selected core is generated by the earlier selected sides."""
    chosen = f.check_indices(indices)
    for gamma in sorted(chosen):
        earlier = skeleton(f, {i for i in chosen if i < gamma})
        core = f.core_images[gamma]
        if not all(
            earlier.contains(core.block_element(i)) for i in range(core.block_count)
        ):
            return False
    return True


def close_under_supports(f: Filtration, indices: Iterable[int]) -> frozenset[int]:
    """Smallest superset closed under the recorded step supports; saturated."""
    out = set(f.check_indices(indices))
    frontier = list(out)
    while frontier:
        gamma = frontier.pop()
        for i in f.steps[gamma].support:
            if i not in out:
                out.add(i)
                frontier.append(i)
    return frozenset(out)


def element_support(f: Filtration, h: Element) -> frozenset[int]:
    """An inclusion-minimal index set whose skeleton contains the element."""
    if h.algebra != f.final:
        raise PreconditionError(f"{h!r} does not live in the final algebra")
    return frozenset(
        _greedy_support(f.final, f.side_images, [h], len(f.steps))
    )


def saturate(f: Filtration, elements: Iterable[Element]) -> frozenset[int]:
    """A saturated index set whose skeleton contains the given elements.

    Per-element minimal supports seed the set; closing under the recorded
    step supports is a finite fixpoint and preserves coverage.
    """
    base: set[int] = set()
    for h in elements:
        base |= element_support(f, h)
    return close_under_supports(f, base)


def check_skeleton_pushout(
    f: Filtration, gamma1: Iterable[int], gamma2: Iterable[int]
) -> PushoutCheck:
    """Verify that two saturated skeletons form a push-out over their meet.

    The square of skeleton inclusions is re-expressed over the blocks of the
    joint skeleton and run through the push-out verifier.  Unsaturated input
    is a precondition violation, reported distinctly.
    """
    g1 = f.check_indices(gamma1)
    g2 = f.check_indices(gamma2)
    for name, g in (("first", g1), ("second", g2), ("intersection", g1 & g2)):
        if not is_saturated(f, g):
            raise PreconditionError(f"{name} index set is not saturated")
    ambient = skeleton(f, g1 | g2)
    return verify_pushout(
        Diagram(
            ambient.as_algebra(),
            restrict(skeleton(f, g1), ambient),
            restrict(skeleton(f, g2), ambient),
            restrict(skeleton(f, g1 & g2), ambient),
        )
    )


@dataclass(frozen=True)
class FiltrationReport:
    ok: bool
    violations: tuple[str, ...]


def verify_filtration(f: Filtration) -> FiltrationReport:
    """Check every structural invariant, reporting per-step violations."""
    violations: list[str] = []
    m = len(f.steps)
    base = f.steps[0].before if m else f.final
    if base.atom_count != 1:
        violations.append("step 0: base algebra is not the two-element algebra")
    for alpha, step in enumerate(f.steps):
        after = f.steps[alpha + 1].before if alpha + 1 < m else f.final
        if step.embedding.domain != step.before or step.embedding.codomain != after:
            violations.append(f"step {alpha}: embedding endpoints are wrong")
            continue
        if step.side_embedding.domain != step.side or step.side_embedding.codomain != after:
            violations.append(f"step {alpha}: side embedding endpoints are wrong")
            continue
        if not step.embedding.is_injective or not step.side_embedding.is_injective:
            violations.append(f"step {alpha}: embeddings are not injective")
        for i in range(step.core.block_count):
            left = step.embedding.apply(step.core.block_element(i))
            right = step.side_embedding.apply(
                step.core_in_side.block_element(step.matching[i])
            )
            if left != right:
                violations.append(f"step {alpha}: core images disagree")
                break
        diagram = Diagram(
            after,
            pushforward(SubalgebraPartition.discrete(step.before), step.embedding),
            pushforward(SubalgebraPartition.discrete(step.side), step.side_embedding),
            pushforward(step.core, step.embedding),
        )
        check = verify_pushout(diagram)
        for failure in check.failures:
            violations.append(f"step {alpha}: square fails {failure}")
        if any(i >= alpha for i in step.support):
            violations.append(f"step {alpha}: support reaches forward")
        else:
            sk = skeleton(f, step.support)
            core = f.core_images[alpha]
            if not all(
                sk.contains(core.block_element(i)) for i in range(core.block_count)
            ):
                violations.append(f"step {alpha}: recorded support does not cover the core")
    for alpha in range(m + 1):
        if alpha < m:
            chain = f.steps[alpha].embedding
            for later in f.steps[alpha + 1 :]:
                chain = chain.then(later.embedding)
            expected = pushforward(SubalgebraPartition.discrete(f.steps[alpha].before), chain)
            if f.stage_images[alpha] != expected:
                violations.append(f"step {alpha}: cached stage image is wrong")
    if f.stage_images[m] != SubalgebraPartition.discrete(f.final):
        violations.append("final stage image is not the whole algebra")
    return FiltrationReport(not violations, tuple(violations))


def bracket_solve(
    f: Filtration,
    delta: Iterable[int],
    gammas: Sequence[Iterable[int]],
    elements: Sequence[Element],
    p: BoolPoly,
) -> list[tuple[Element, Element]]:
    """Squeeze each a_i between elements of the delta skeleton.

    Requires: delta and every gamma saturated, the gammas pairwise meeting
    exactly in delta, a_i in the gamma_i skeleton, and P(a) = 0.  The result
    pairs r_i^- <= a_i <= r_i^+ lie in the delta skeleton and keep P at zero
    for every low/high sign choice; the postconditions are re-checked before
    returning.

    Solved one coordinate at a time: the equation is rewritten as an interval
    constraint on x_k, the interval ends are evaluated at the already-chosen
    pairs (all sign choices) and the remaining a's, and the canonical
    approximants of the ends inside the delta skeleton are taken.
    """
    if p.arity < 1:
        raise ArityMismatchError("polynomial must have at least one variable")
    if len(gammas) != p.arity or len(elements) != p.arity:
        raise ArityMismatchError(
            f"expected {p.arity} index sets and elements, got {len(gammas)} and {len(elements)}"
        )
    d = f.check_indices(delta)
    gs = [f.check_indices(g) for g in gammas]
    if not is_saturated(f, d):
        raise PreconditionError("delta is not saturated")
    for i, g in enumerate(gs):
        if not is_saturated(f, g):
            raise PreconditionError(f"gamma {i + 1} is not saturated")
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            if gs[i] & gs[j] != d:
                raise PreconditionError(
                    f"gamma {i + 1} and gamma {j + 1} do not meet exactly in delta"
                )
    for i, (g, a) in enumerate(zip(gs, elements)):
        if a.algebra != f.final:
            raise PreconditionError(f"element {i + 1} does not live in the final algebra")
        if not skeleton(f, g).contains(a):
            raise PreconditionError(f"element {i + 1} is outside its skeleton")
    if not eval_poly(p, elements, f.final).is_zero:
        raise PreconditionError("the equation P(a) = 0 does not hold")

    e_delta = skeleton(f, d)
    pairs: list[tuple[Element, Element]] = []
    for k in range(1, p.arity + 1):
        p_minus, p_plus = eliminate(p, k)
        low = f.final.zero
        high = f.final.one
        rest = list(elements[k:])
        for signs in product((0, 1), repeat=k - 1):
            chosen = [pairs[i][s] for i, s in enumerate(signs)]
            low = low | eval_poly(p_minus, chosen + rest, f.final)
            high = high & eval_poly(p_plus, chosen + rest, f.final)
        r_minus = upper_approx(e_delta, low)
        r_plus = lower_approx(e_delta, high)
        a_k = elements[k - 1]
        if not (r_minus <= a_k and a_k <= r_plus):
            raise PreconditionError(
                f"canonical approximants do not sandwich element {k}; "
                "the separation preconditions cannot have held"
            )
        pairs.append((r_minus, r_plus))

    lows = [lo for lo, _ in pairs]
    highs = [hi for _, hi in pairs]
    if not all(e_delta.contains(lo) and e_delta.contains(hi) for lo, hi in pairs):
        raise PreconditionError("solver produced values outside the delta skeleton")
    if not all_signs_vanish(p, lows, highs, f.final):
        raise PreconditionError("solver output fails the all-sign vanishing check")
    return pairs
