"""Term grammar for polynomials.

Variables are x1..xn, constants 0 and 1, operators ! (not), & (and),
\\ (difference), ^ (xor), | (or), with parentheses; whitespace is ignored.
Precedence from tightest: !, then & and \\ (left associative), then ^,
then |.  Terms are parsed straight into truth tables.
"""

from __future__ import annotations

import re

from .core import BoolPoly
from .errors import TermSyntaxError

_TOKEN = re.compile(r"\s*(x\d+|[01()!&|^\\])")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise TermSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r} at offset {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def max_variable(text: str) -> int:
    """Largest variable index mentioned; 0 if none."""
    return max((int(t[1:]) for t in _tokenize(text) if t.startswith("x")), default=0)


class _Parser:
    def __init__(self, tokens: list[str], arity: int):
        self.tokens = tokens
        self.pos = 0
        self.arity = arity

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise TermSyntaxError("unexpected end of term")
        self.pos += 1
        return tok

    def parse(self) -> BoolPoly:
        poly = self.or_level()
        if self.peek() is not None:
            raise TermSyntaxError(f"trailing input at token {self.peek()!r}")
        return poly

    def or_level(self) -> BoolPoly:
        poly = self.xor_level()
        while self.peek() == "|":
            self.take()
            poly = poly | self.xor_level()
        return poly

    def xor_level(self) -> BoolPoly:
        poly = self.and_level()
        while self.peek() == "^":
            self.take()
            poly = poly ^ self.and_level()
        return poly

    def and_level(self) -> BoolPoly:
        poly = self.unary()
        while self.peek() in ("&", "\\"):
            op = self.take()
            rhs = self.unary()
            poly = poly & rhs if op == "&" else poly & ~rhs
        return poly

    def unary(self) -> BoolPoly:
        tok = self.take()
        if tok == "!":
            return ~self.unary()
        if tok == "(":
            poly = self.or_level()
            if self.take() != ")":
                raise TermSyntaxError("expected ')'")
            return poly
        if tok == "0":
            return BoolPoly.constant(self.arity, 0)
        if tok == "1":
            return BoolPoly.constant(self.arity, 1)
        if tok.startswith("x"):
            k = int(tok[1:])
            if not 1 <= k <= self.arity:
                raise TermSyntaxError(
                    f"variable {tok} out of range for arity {self.arity}"
                )
            return BoolPoly.variable(self.arity, k)
        raise TermSyntaxError(f"unexpected token {tok!r}")


def parse_term(text: str, arity: int | None = None) -> BoolPoly:
    """Parse a term into a polynomial.

    With arity None, the arity is the largest variable index mentioned
    (0 for a constant term).
    """
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty term")
    if arity is None:
        arity = max((int(t[1:]) for t in tokens if t.startswith("x")), default=0)
    return _Parser(tokens, arity).parse()


def to_dnf(p: BoolPoly) -> str:
    """Canonical full disjunctive normal form, minterms in ascending order."""
    if p.table == 0:
        return "0"
    if p.table == p.table_mask:
        return "1"
    terms = []
    for m in range(p.rows):
        if p.table >> m & 1:
            lits = [
                (f"x{j + 1}" if m >> j & 1 else f"!x{j + 1}")
                for j in range(p.arity)
            ]
            terms.append(" & ".join(lits))
    return " | ".join(terms)
