"""Posets and Heyting algebras up to isomorphism.

Posets are enumerated by adding one maximal element at a time: every
``n``-point poset arises from an ``(n-1)``-point one by placing a new
maximal point above some down-set.  Candidates are deduplicated by
canonical form and stored as canonically relabelled representatives.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .errors import FormatError, SizeError
from .heyting import HAlg, Hom
from .poset import (
    PMorphism,
    Poset,
    canonical_form,
    canonical_poset,
    count_upsets,
    enumerate_upsets,
    mk_poset,
    pmorphisms,
)

MAX_CATALOG_SIZE = 7


def _children(p: Poset) -> list[Poset]:
    out = []
    for downset in enumerate_upsets(p.dual_order()):
        t = p.n
        up = tuple(m | ((1 << t) if (downset >> i) & 1 else 0) for i, m in enumerate(p.up)) + (1 << t,)
        out.append(Poset(p.n + 1, up))
    return out


@lru_cache(maxsize=None)
def _posets(n: int) -> tuple[Poset, ...]:
    if n == 0:
        return (Poset(0, ()),)
    seen: dict[bytes, Poset] = {}
    for parent in _posets(n - 1):
        for child in _children(parent):
            code = canonical_form(child)
            if code not in seen:
                seen[code] = canonical_poset(child)
    return tuple(seen[c] for c in sorted(seen))


def enumerate_posets(n: int, bound: int = MAX_CATALOG_SIZE) -> list[Poset]:
    """One representative per isomorphism class of ``n``-point posets."""
    if not 1 <= n <= bound:
        raise SizeError(f"poset size {n} outside 1..{bound}")
    return list(_posets(n))


def posets_up_to(n: int) -> list[Poset]:
    return [p for k in range(1, n + 1) for p in enumerate_posets(k)]


def algebras_up_to(n: int) -> list[HAlg]:
    """Catalog algebras whose duals have at most ``n`` points."""
    return [HAlg(p) for p in posets_up_to(n)]


@lru_cache(maxsize=None)
@lru_cache(maxsize=None)
def _small_algebra_duals(max_elements: int) -> tuple[Poset, ...]:
    # adding a point never lowers the up-set count, so prune on it
    found: dict[bytes, Poset] = {}
    layer = [Poset(0, ())]
    while layer:
        nxt: dict[bytes, Poset] = {}
        for parent in layer:
            for child in _children(parent):
                if count_upsets(child, max_elements) > max_elements:
                    continue
                code = canonical_form(child)
                if code not in nxt:
                    nxt[code] = canonical_poset(child)
        found.update(nxt)
        layer = list(nxt.values())
    return tuple(sorted(found.values(), key=lambda p: (count_upsets(p), p.n, canonical_form(p))))


def algebras_with_at_most(max_elements: int) -> list[HAlg]:
    """All finite nontrivial Heyting algebras with at most ``max_elements``
    elements, up to isomorphism, smallest first."""
    return [HAlg(p) for p in _small_algebra_duals(max_elements)]


def embeddings_between(a: HAlg, b: HAlg) -> list[Hom]:
    """All Heyting embeddings ``a -> b``, one per surjective p-morphism
    ``dual(b) -> dual(a)``."""
    return [Hom(a, b, PMorphism(b.dual, a.dual, f)) for f in pmorphisms(b.dual, a.dual, surjective=True)]


def surjections_between(a: HAlg, b: HAlg) -> list[Hom]:
    """All surjective homomorphisms ``a -> b`` (injective dual p-morphisms)."""
    return [Hom(a, b, PMorphism(b.dual, a.dual, f)) for f in pmorphisms(b.dual, a.dual, injective=True)]


@dataclass
class Catalog:
    """Canonical poset codes grouped by size."""

    by_size: dict[int, list[bytes]] = field(default_factory=dict)
    index: dict[bytes, Poset] = field(default_factory=dict)

    @classmethod
    def build(cls, n: int) -> "Catalog":
        cat = cls()
        for k in range(1, n + 1):
            for p in enumerate_posets(k):
                cat.add(p)
        return cat

    def add(self, p: Poset) -> bytes:
        code = canonical_form(p)
        if code not in self.index:
            self.index[code] = canonical_poset(p)
            bucket = self.by_size.setdefault(p.n, [])
            bucket.append(code)
            bucket.sort()
        return code

    def counts(self) -> list[int]:
        return [len(self.by_size.get(k, [])) for k in range(1, max(self.by_size, default=0) + 1)]

    def posets(self, n: int | None = None) -> list[Poset]:
        sizes = [n] if n is not None else sorted(self.by_size)
        return [self.index[c] for k in sizes for c in self.by_size.get(k, [])]

    def dumps(self) -> str:
        lines = []
        for k in sorted(self.by_size):
            for code in self.by_size[k]:
                p = self.index[code]
                covers = ",".join(f"{i}-{j}" for i, j in p.cover_pairs)
                lines.append(f"{p.n};{covers}")
        return "".join(line + "\n" for line in lines)

    def save(self, path: str | os.PathLike) -> None:
        Path(path).write_bytes(self.dumps().encode("utf-8"))

    @classmethod
    def loads(cls, text: str) -> "Catalog":
        cat = cls()
        for lineno, line in enumerate(text.split("\n"), start=1):
            if line == "":
                continue
            head, sep, rest = line.partition(";")
            if not sep or not head.isdigit():
                raise FormatError(lineno, f"expected 'n;covers', got {line!r}")
            n = int(head)
            covers = []
            for item in filter(None, rest.split(",")):
                a, dash, b = item.partition("-")
                if not dash or not a.isdigit() or not b.isdigit():
                    raise FormatError(lineno, f"bad cover {item!r}")
                covers.append((int(a), int(b)))
            try:
                p = mk_poset(n, covers)
            except Exception as exc:
                raise FormatError(lineno, str(exc)) from None
            if canonical_form(p) in cat.index:
                raise FormatError(lineno, "duplicate isomorphism class")
            cat.add(p)
        return cat

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Catalog":
        return cls.loads(Path(path).read_bytes().decode("utf-8"))


def default_catalog(n: int) -> Catalog:
    """Catalog up to ``n`` points, taken from ``$HEYTICA_CATALOG`` when set."""
    env = os.environ.get("HEYTICA_CATALOG")
    if env and Path(env).exists():
        cat = Catalog.load(env)
        if max(cat.by_size, default=0) >= n:
            return cat
    return Catalog.build(n)
