"""Finite Heyting algebras as up-set algebras of their dual posets.

An element of :class:`HAlg` is an up-set of ``H.dual`` encoded as an int bit
mask; ``0`` is the empty set and ``1`` the full carrier.  Homomorphisms are
stored through their dual p-morphism, which exists for every Heyting
homomorphism between finite algebras; element maps are derived from it by
inverse image.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .errors import AxiomError, BadElement, DegenerateError, NotHomomorphism, NotPMorphism, SizeError
from .poset import (
    DEFAULT_UPSET_BOUND,
    PMorphism,
    Poset,
    add_top,
    bits,
    count_upsets,
    enumerate_upsets,
    is_pmorphism,
    mask_of,
    mk_poset,
    poset_automorphisms,
    poset_to_json,
    poset_from_json,
)


@dataclass(frozen=True, eq=False)
class HAlg:
    """The Heyting algebra of up-sets of a nonempty finite poset."""

    dual: Poset
    labels: Mapping[int, str] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.dual.n == 0:
            raise DegenerateError("the up-set algebra of the empty poset has 0 = 1")
        object.__setattr__(self, "_lock", threading.Lock())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HAlg) and self.dual == other.dual

    def __hash__(self) -> int:
        return hash(self.dual)

    def __repr__(self) -> str:
        return f"HAlg(dual_n={self.dual.n}, covers={list(self.dual.cover_pairs)})"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return self.dual.full

    @property
    def elements(self) -> list[int]:
        # enumeration happens once even under concurrent first access
        cache = self.__dict__.get("_elements")
        if cache is None:
            with self._lock:
                cache = self.__dict__.get("_elements")
                if cache is None:
                    cache = enumerate_upsets(self.dual, DEFAULT_UPSET_BOUND)
                    self.__dict__["_elements"] = cache
        return cache

    @cached_property
    def index(self) -> dict[int, int]:
        return {m: k for k, m in enumerate(self.elements)}

    def size(self, bound: int | None = None) -> int:
        if "_elements" in self.__dict__:
            return len(self.__dict__["_elements"])
        return count_upsets(self.dual, bound)

    def is_element(self, u: int) -> bool:
        return 0 <= u <= self.one and self.dual.is_upset(u)

    def check(self, u: int) -> int:
        if not self.is_element(u):
            raise BadElement(f"{u:#b} is not an up-set of the dual poset")
        return u

    def meet(self, u: int, v: int) -> int:
        return u & v

    def join(self, u: int, v: int) -> int:
        return u | v

    def implies(self, u: int, v: int) -> int:
        return self.one & ~self.dual.down_closure(u & ~v)

    def neg(self, u: int) -> int:
        return self.implies(u, 0)

    def leq(self, u: int, v: int) -> bool:
        return u & ~v == 0

    def principal(self, p: int) -> int:
        return self.dual.up[p]

    def interior(self, s: int) -> int:
        """Largest up-set inside the arbitrary subset ``s``."""
        return mask_of(p for p in bits(s) if self.dual.up[p] & ~s == 0)

    def is_regular(self, u: int) -> bool:
        return self.neg(self.neg(u)) == u

    def atoms(self) -> list[int]:
        """Atoms are the up-sets ``{m}`` for maximal points ``m`` of the dual."""
        return [1 << m for m in self.dual.maximal()]

    def label(self, u: int) -> str:
        if self.labels and u in self.labels:
            return self.labels[u]
        return "{" + ",".join(map(str, bits(u))) + "}"


def algebra_of(p: Poset) -> HAlg:
    return HAlg(p)


def implies(h: HAlg, u: int, v: int) -> int:
    return h.implies(u, v)


TWO = HAlg(Poset.chain(1))
C3 = HAlg(Poset.chain(2))
B4 = HAlg(Poset.antichain(2))


# -- abstract lattices -----------------------------------------------------


def _dualize_lattice(
    m: int,
    leq: Callable[[int, int], bool],
    join: Callable[[int, int], int],
    bottom: int,
) -> tuple[Poset, list[int], list[int]]:
    """Dual poset of a finite distributive lattice given by callables.

    Returns the dual poset (points = join-primes in carrier order, reversed
    order), the carrier indices of the join-primes, and for each carrier
    element the up-set of primes below it.
    """
    primes = []
    for a in range(m):
        if a == bottom:
            continue
        acc = bottom
        for b in range(m):
            if b != a and leq(b, a):
                acc = join(acc, b)
        if acc != a:
            primes.append(a)
    k = len(primes)
    up = tuple(mask_of(j for j in range(k) if leq(primes[j], primes[i])) for i in range(k))
    dual = Poset(k, up)
    rep = [mask_of(i for i in range(k) if leq(primes[i], a)) for a in range(m)]
    return dual, primes, rep


def join_primes(h: HAlg) -> list[int]:
    """Nonzero elements ``a`` with ``a <= b | c`` only if ``a <= b`` or ``a <= c``.

    Found through the lattice structure alone (an element is join-prime iff
    the join of everything strictly below it is strictly smaller), which in
    dual representation singles out the principal up-sets.
    """
    els = h.elements
    _, primes, _ = _dualize_lattice(
        len(els), lambda i, j: h.leq(els[i], els[j]), lambda i, j: h.index[els[i] | els[j]], 0
    )
    return [els[i] for i in primes]


def dual_poset(h: HAlg) -> tuple[Poset, "Hom"]:
    """Poset of join-primes with reversed order, and the isomorphism
    ``algebra_of(dual) -> h``."""
    primes = join_primes(h)
    k = len(primes)
    up = tuple(mask_of(j for j in range(k) if h.leq(primes[j], primes[i])) for i in range(k))
    d = Poset(k, up)
    point_of = {}
    for j, pr in enumerate(primes):
        (p,) = h.dual.minimal(pr)
        point_of[p] = j
    iso = Hom(HAlg(d), h, PMorphism(h.dual, d, tuple(point_of[p] for p in range(h.dual.n))))
    return d, iso


# -- homomorphisms ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Hom:
    """Heyting homomorphism ``source -> target`` given by its dual p-morphism.

    ``dual`` maps ``target.dual`` into ``source.dual``; the element map sends
    an up-set to its inverse image.
    """

    source: HAlg
    target: HAlg
    dual: PMorphism

    def __post_init__(self) -> None:
        if self.dual.source != self.target.dual or self.dual.target != self.source.dual:
            raise NotHomomorphism("dual p-morphism does not connect the algebras' duals")

    def __call__(self, u: int) -> int:
        return self.dual.preimage(u)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Hom)
            and self.source == other.source
            and self.target == other.target
            and self.dual.map == other.dual.map
        )

    def __hash__(self) -> int:
        return hash(self.dual.map)

    def is_injective(self) -> bool:
        return self.dual.is_surjective()

    def is_surjective(self) -> bool:
        return self.dual.is_injective()

    def then(self, other: "Hom") -> "Hom":
        """``other`` after ``self``."""
        if other.source != self.target:
            raise NotHomomorphism("composition of homomorphisms with mismatched ends")
        return Hom(self.source, other.target, other.dual.then(self.dual))

    def table(self) -> dict[int, int]:
        return {u: self(u) for u in self.source.elements}

    @classmethod
    def identity(cls, h: HAlg) -> "Hom":
        return cls(h, h, PMorphism.identity(h.dual))

    @classmethod
    def from_map(cls, source: HAlg, target: HAlg, mapping: Mapping[int, int] | Callable[[int], int]) -> "Hom":
        """Recover the homomorphism from an element map, or raise NotHomomorphism.

        Each point ``q`` of the target dual determines the prime filter
        ``{a : q in h(a)}``; its least element must be a principal up-set
        ``up p`` of the source dual and ``q -> p`` is the dual map.
        """
        f = mapping if callable(mapping) else mapping.__getitem__
        els = source.elements
        try:
            images = [f(a) for a in els]
        except KeyError as exc:
            raise NotHomomorphism(f"map undefined at {exc}") from None
        dmap = []
        for q in range(target.dual.n):
            meet = source.one
            for a, img in zip(els, images):
                if (img >> q) & 1:
                    meet &= a
            mins = source.dual.minimal(meet)
            if len(mins) != 1 or source.dual.up[mins[0]] != meet:
                raise NotHomomorphism(f"no prime filter at dual point {q}")
            dmap.append(mins[0])
        if not is_pmorphism(dmap, target.dual, source.dual):
            raise NotHomomorphism("induced dual map is not a p-morphism")
        hom = cls(source, target, PMorphism(target.dual, source.dual, tuple(dmap)))
        for a, img in zip(els, images):
            if hom(a) != img:
                raise NotHomomorphism(f"map disagrees with its dual at {a:#b}")
        return hom


def dual_of_pmorphism(f: PMorphism) -> Hom:
    """Inverse image along ``f: P -> Q`` as a homomorphism ``alg(Q) -> alg(P)``."""
    if not is_pmorphism(f.map, f.source, f.target):
        raise NotPMorphism("not a p-morphism")
    return Hom(HAlg(f.target), HAlg(f.source), f)


def preserves_operations(h: HAlg, k: HAlg, f: Mapping[int, int]) -> bool:
    """Brute-force test that ``f`` preserves 0, 1, meet, join and implication."""
    if f[h.zero] != k.zero or f[h.one] != k.one:
        return False
    for a in h.elements:
        for b in h.elements:
            if f[a & b] != f[a] & f[b] or f[a | b] != f[a] | f[b]:
                return False
            if f[h.implies(a, b)] != k.implies(f[a], f[b]):
                return False
    return True


# -- subalgebras -----------------------------------------------------------


def closure(h: HAlg, gens: Iterable[int], bound: int | None = None) -> list[int]:
    """Elements of the subalgebra generated by ``gens`` (sorted by size, value)."""
    seen = {h.zero, h.one}
    queue = [h.zero, h.one]
    for g in gens:
        h.check(g)
        if g not in seen:
            seen.add(g)
            queue.append(g)
    done: list[int] = []
    while queue:
        x = queue.pop()
        done.append(x)
        for y in list(done):
            for z in (x & y, x | y, h.implies(x, y), h.implies(y, x)):
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
                    if bound is not None and len(seen) > bound:
                        raise SizeError(f"generated subalgebra exceeds {bound} elements")
    return sorted(seen, key=lambda m: (m.bit_count(), m))


def subalgebra_on(h: HAlg, carrier: Sequence[int]) -> tuple[HAlg, Hom]:
    """Dual-represented copy of a subalgebra given by its host elements.

    The carrier must be closed under the operations (see :func:`closure`).
    """
    els = list(carrier)
    pos = {m: i for i, m in enumerate(els)}
    bottom = pos[h.zero]
    d, primes, _ = _dualize_lattice(len(els), lambda i, j: h.leq(els[i], els[j]), lambda i, j: pos[els[i] | els[j]], bottom)
    sub = HAlg(d)
    prime_masks = [els[i] for i in primes]
    dmap = []
    for q in range(h.dual.n):
        meet = h.one
        for m in els:
            if (m >> q) & 1:
                meet &= m
        dmap.append(prime_masks.index(meet))
    return sub, Hom(sub, h, PMorphism(h.dual, d, tuple(dmap)))


def generated_subalgebra(h: HAlg, gens: Iterable[int], bound: int | None = None) -> tuple[HAlg, Hom]:
    """Subalgebra generated by ``gens`` with its inclusion into ``h``."""
    return subalgebra_on(h, closure(h, gens, bound))


def generated_partial_map(h: HAlg, pairs: Sequence[tuple[int, int]], target: HAlg | None = None) -> dict[int, int] | None:
    """Extend a generator correspondence to the generated subalgebra.

    Closes the set of pairs under the componentwise operations.  Returns the
    resulting map (an isomorphism between the two generated subalgebras) or
    ``None`` if the correspondence is not well defined or not injective.
    """
    k = target or h
    f: dict[int, int] = {h.zero: k.zero, h.one: k.one}
    back: dict[int, int] = {k.zero: h.zero, k.one: h.one}

    def add(a: int, b: int) -> bool:
        if a in f:
            return f[a] == b
        if b in back:
            return False
        f[a] = b
        back[b] = a
        queue.append(a)
        return True

    queue: list[int] = [h.zero, h.one]
    for a, b in pairs:
        if not add(a, b):
            return None
    done: list[int] = []
    while queue:
        x = queue.pop()
        done.append(x)
        for y in list(done):
            fx, fy = f[x], f[y]
            for z, w in (
                (x & y, fx & fy),
                (x | y, fx | fy),
                (h.implies(x, y), k.implies(fx, fy)),
                (h.implies(y, x), k.implies(fy, fx)),
            ):
                if not add(z, w):
                    return None
    return f


# -- raw tables ------------------------------------------------------------


@dataclass(frozen=True)
class RawTables:
    size: int
    meet: Sequence[Sequence[int]]
    join: Sequence[Sequence[int]]
    imp: Sequence[Sequence[int]]
    zero: int
    one: int


def tables_of(h: HAlg) -> RawTables:
    els = h.elements
    ix = h.index
    n = len(els)
    return RawTables(
        n,
        [[ix[els[a] & els[b]] for b in range(n)] for a in range(n)],
        [[ix[els[a] | els[b]] for b in range(n)] for a in range(n)],
        [[ix[h.implies(els[a], els[b])] for b in range(n)] for a in range(n)],
        ix[h.zero],
        ix[h.one],
    )


def validate_heyting_tables(t: RawTables) -> HAlg:
    """Check the Heyting identities on raw tables and convert to dual form.

    The returned algebra carries ``labels`` mapping each up-set to the table
    index it came from.
    """
    n = t.size
    rng = range(n)
    for name, tab in (("meet", t.meet), ("join", t.join), ("imp", t.imp)):
        if len(tab) != n or any(len(row) != n or any(not 0 <= v < n for v in row) for row in tab):
            raise AxiomError(f"{name} table arity", {"size": n})
    if not (0 <= t.zero < n and 0 <= t.one < n):
        raise AxiomError("constants in range", {"zero": t.zero, "one": t.one})
    if n == 1 or t.zero == t.one:
        raise DegenerateError("0 = 1")
    m, j, imp = t.meet, t.join, t.imp
    for a in rng:
        if m[a][a] != a:
            raise AxiomError("meet idempotence", {"a": a})
        if j[a][a] != a:
            raise AxiomError("join idempotence", {"a": a})
        for b in rng:
            if m[a][b] != m[b][a]:
                raise AxiomError("meet commutativity", {"a": a, "b": b})
            if j[a][b] != j[b][a]:
                raise AxiomError("join commutativity", {"a": a, "b": b})
            if m[a][j[a][b]] != a:
                raise AxiomError("absorption a&(a|b)=a", {"a": a, "b": b})
            if j[a][m[a][b]] != a:
                raise AxiomError("absorption a|(a&b)=a", {"a": a, "b": b})
            for c in rng:
                if m[a][m[b][c]] != m[m[a][b]][c]:
                    raise AxiomError("meet associativity", {"a": a, "b": b, "c": c})
                if j[a][j[b][c]] != j[j[a][b]][c]:
                    raise AxiomError("join associativity", {"a": a, "b": b, "c": c})
    for a in rng:
        if m[t.zero][a] != t.zero:
            raise AxiomError("0 is least", {"a": a})
        if j[t.one][a] != t.one:
            raise AxiomError("1 is greatest", {"a": a})

    def leq(x: int, y: int) -> bool:
        return m[x][y] == x

    for a in rng:
        for b in rng:
            for c in rng:
                if leq(c, imp[a][b]) != leq(m[c][a], b):
                    raise AxiomError("residuation c<=a->b iff c&a<=b", {"a": a, "b": b, "c": c})
    d, _, rep = _dualize_lattice(n, leq, lambda x, y: j[x][y], t.zero)
    h = HAlg(d)
    if sorted(rep, key=lambda u: (u.bit_count(), u)) != h.elements:
        raise AxiomError("distributivity (prime representation is not onto the up-sets)", {})
    return HAlg(d, labels={rep[a]: str(a) for a in rng})


# -- automorphisms and the star construction ------------------------------


def automorphisms(h: HAlg) -> list[Hom]:
    """All automorphisms, lifted from the dual poset by inverse image."""
    return [Hom(h, h, PMorphism(h.dual, h.dual, g)) for g in poset_automorphisms(h.dual)]


def add_bottom(h: HAlg) -> tuple[HAlg, int]:
    """Adjoin a new least element below ``0_h``.

    Dually a new top point ``t`` is added.  Returns ``(h_star, old_zero)``
    where ``old_zero = {t}`` is the image of ``0_h``; an old element ``u``
    sits in ``h_star`` as ``u | old_zero``.
    """
    p, t = add_top(h.dual)
    return HAlg(p), 1 << t


# -- interchange -----------------------------------------------------------


def algebra_to_json(h: HAlg) -> dict:
    out: dict = {"dual": poset_to_json(h.dual)}
    if h.labels:
        out["labels"] = {",".join(map(str, bits(u))): lab for u, lab in sorted(h.labels.items())}
    return out


def algebra_from_json(obj: dict) -> HAlg:
    d = poset_from_json(obj["dual"])
    labels = None
    if obj.get("labels"):
        labels = {mask_of(int(x) for x in k.split(",") if x != ""): v for k, v in obj["labels"].items()}
    return HAlg(d, labels=labels)


def element_to_json(u: int) -> list[int]:
    return list(bits(u))


def element_from_json(h: HAlg, obj: Sequence[int]) -> int:
    return h.check(mask_of(obj))


def hom_to_json(f: Hom) -> dict:
    return {"source": algebra_to_json(f.source), "target": algebra_to_json(f.target), "dual_map": list(f.dual.map)}


__all__ = [
    "HAlg",
    "Hom",
    "RawTables",
    "TWO",
    "C3",
    "B4",
    "algebra_of",
    "implies",
    "join_primes",
    "dual_poset",
    "dual_of_pmorphism",
    "generated_subalgebra",
    "generated_partial_map",
    "subalgebra_on",
    "closure",
    "validate_heyting_tables",
    "tables_of",
    "automorphisms",
    "add_bottom",
    "preserves_operations",
    "mk_poset",
]
