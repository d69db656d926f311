"""Interval elimination for Boolean equations.

The equation P(x_1,...,x_n) = 0 pins x_k between two polynomials in the
remaining variables: substitute 0 for the low end and the complement of the
substitution of 1 for the high end.  The sign-robustness check confirms that
vanishing at all low/high corner choices forces vanishing on everything
sandwiched between them.
"""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .core import BoolPoly, Element, FiniteAlgebra, eval_poly
from .errors import ArityMismatchError, InvalidIndexError, OrderError


def eliminate(p: BoolPoly, k: int) -> tuple[BoolPoly, BoolPoly]:
    """Rewrite P = 0 as p_minus <= x_k <= p_plus (k is 1-based).

    For all elements of any finite algebra, P(a) = 0 holds exactly when
    p_minus(a_others) <= a_k <= p_plus(a_others).
    """
    if not 1 <= k <= p.arity:
        raise InvalidIndexError(f"variable index {k} out of range for arity {p.arity}")
    p_minus = p.cofactor(k, 0)
    p_plus = ~p.cofactor(k, 1)
    return p_minus, p_plus


def all_signs_vanish(
    p: BoolPoly,
    lows: Sequence[Element],
    highs: Sequence[Element],
    algebra: FiniteAlgebra,
) -> bool:
    """True iff P is 0 on every choice of low or high per coordinate."""
    if len(lows) != p.arity or len(highs) != p.arity:
        raise ArityMismatchError(
            f"expected {p.arity} lows and highs, got {len(lows)} and {len(highs)}"
        )
    for i, (lo, hi) in enumerate(zip(lows, highs)):
        if not lo <= hi:
            raise OrderError(f"lows[{i}] is not below highs[{i}]")
    for signs in product((0, 1), repeat=p.arity):
        args = [highs[i] if s else lows[i] for i, s in enumerate(signs)]
        if not eval_poly(p, args, algebra).is_zero:
            return False
    return True
