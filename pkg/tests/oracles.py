"""Brute-force reference computations, deliberately naive and independent
of the library's search code."""

from __future__ import annotations

import itertools

from heytica.heyting import HAlg


def upsets_brute(n: int, leq) -> list[int]:
    out = []
    for s in range(1 << n):
        if all(not (s >> i) & 1 or all((s >> j) & 1 for j in range(n) if leq(i, j)) for i in range(n)):
            out.append(s)
    return out


def poset_classes(n: int, natural: bool = True) -> int:
    """Posets on n points up to isomorphism.

    With ``natural`` only relations contained in i < j are scanned (every
    poset has a linear extension); otherwise all irreflexive relations.
    Isomorphism classes are told apart by the least relabelled relation.
    """
    if natural:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    perms = list(itertools.permutations(range(n)))
    seen = set()
    for k in range(1 << len(pairs)):
        rel = {pairs[t] for t in range(len(pairs)) if (k >> t) & 1}
        if any((j, i) in rel for i, j in rel):
            continue
        if any((i, l) not in rel for i, j in rel for (j2, l) in rel if j2 == j and l != i):
            continue
        seen.add(min(tuple(sorted((p[i], p[j]) for i, j in rel)) for p in perms))
    return len(seen)


def heyting_embeddings_brute(a: HAlg, b: HAlg) -> set[tuple[int, ...]]:
    """Injective maps preserving 0, 1, meet, join and implication, by
    backtracking over the element lists."""
    ea, eb = a.elements, b.elements
    out: set[tuple[int, ...]] = set()
    f: dict[int, int] = {}

    def consistent(x: int) -> bool:
        for y in f:
            fx, fy = f[x], f[y]
            for u, v in ((x & y, fx & fy), (x | y, fx | fy), (a.implies(x, y), b.implies(fx, fy)), (a.implies(y, x), b.implies(fy, fx))):
                if u in f and f[u] != v:
                    return False
        return True

    def rec(k: int) -> None:
        if k == len(ea):
            if all(f[x & y] == f[x] & f[y] and f[x | y] == f[x] | f[y] and f[a.implies(x, y)] == b.implies(f[x], f[y]) for x in ea for y in ea):
                out.add(tuple(f[x] for x in ea))
            return
        x = ea[k]
        if x == a.zero:
            cands = [b.zero]
        elif x == a.one:
            cands = [b.one]
        else:
            cands = [y for y in eb if y not in f.values()]
        for y in cands:
            if y in f.values():
                continue
            f[x] = y
            if consistent(x):
                rec(k + 1)
            del f[x]

    rec(0)
    return out


def join_prime_brute(h: HAlg, elements: list[int], a: int) -> bool:
    if a == h.zero:
        return False
    return all(not (a & ~(b | c) == 0) or a & ~b == 0 or a & ~c == 0 for b in elements for c in elements)
