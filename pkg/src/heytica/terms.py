"""Terms over {0, 1, and, or, ->} in the variables x and y.

Terms are written as S-expressions, e.g. ``(-> (-> x 0) 0)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import UnboundVariable
from .heyting import HAlg

BINARY = {"and": "and", "&": "and", "∧": "and", "or": "or", "|": "or", "∨": "or", "->": "->", "→": "->"}
LEAVES = ("0", "1", "x", "y")


@dataclass(frozen=True)
class Term:
    op: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return f"({self.op} {' '.join(map(str, self.args))})"

    @property
    def depth(self) -> int:
        return 0 if not self.args else 1 + max(a.depth for a in self.args)

    def variables(self) -> set[str]:
        if not self.args:
            return {self.op} if self.op in ("x", "y") else set()
        return set().union(*(a.variables() for a in self.args))


ZERO, ONE, X, Y = (Term(s) for s in LEAVES)


def parse_term(text: str) -> Term:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of term")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            op = BINARY.get(tokens[pos]) if pos < len(tokens) else None
            if op is None:
                raise ValueError(f"unknown connective at token {pos}")
            pos += 1
            left, right = parse(), parse()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError("expected ')'")
            pos += 1
            return Term(op, (left, right))
        if tok in LEAVES:
            return Term(tok)
        raise ValueError(f"unexpected token {tok!r}")

    t = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens after term")
    return t


def eval_term(t: Term, h: HAlg, assignment: Mapping[str, int]) -> int:
    if t.op == "0":
        return h.zero
    if t.op == "1":
        return h.one
    if t.op in ("x", "y"):
        try:
            return assignment[t.op]
        except KeyError:
            raise UnboundVariable(t.op) from None
    a, b = (eval_term(s, h, assignment) for s in t.args)
    if t.op == "and":
        return a & b
    if t.op == "or":
        return a | b
    return h.implies(a, b)


def star_term(t: Term) -> Term:
    """Replace every constant-0 leaf by the variable y."""
    if t.op == "0":
        return Y
    if not t.args:
        return t
    return Term(t.op, tuple(star_term(a) for a in t.args))


def terms_up_to(depth: int, leaves: tuple[str, ...] = ("0", "1", "x")) -> Iterator[Term]:
    """Every term of depth <= ``depth`` over the given leaves."""
    levels: list[list[Term]] = [[Term(s) for s in leaves]]
    yield from levels[0]
    for d in range(1, depth + 1):
        older = [t for lvl in levels for t in lvl]
        newest = levels[-1]
        fresh = []
        for op in ("and", "or", "->"):
            for a, b in itertools.product(older, older):
                if a in newest or b in newest:
                    fresh.append(Term(op, (a, b)))
        levels.append(fresh)
        yield from fresh
