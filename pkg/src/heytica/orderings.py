"""Natural (anti-lexicographic) orderings of finite Heyting algebras.

A natural ordering is fixed by a linear order on the join-primes, i.e. on
the points of the dual poset.  Join-primes carry the algebra order, which
is the reverse of the dual order, so the prime order must put higher dual
points first.  Elements then compare by the binary number whose digits are
the primes below them, weighted by their rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .amalgam import Amalgam, Diagram, superamalgamate
from .errors import ConstructionError, IncompatibleOrders, NotExtension, SizeError
from .heyting import HAlg, Hom, automorphisms
from .poset import PMorphism, Poset, bits, linear_extensions
from .report import WitnessReport

MAX_PRIMES = 8
EXTENSION_SEARCH_CAP = 100_000


def prime_support(h: HAlg, b: int) -> list[int]:
    """Join-primes below ``b``, as principal up-sets."""
    h.check(b)
    return [h.dual.up[p] for p in bits(b)]


@dataclass(frozen=True)
class NatOrder:
    """``prime_order`` lists dual points from least to greatest."""

    algebra: HAlg
    prime_order: tuple[int, ...]

    @cached_property
    def rank(self) -> tuple[int, ...]:
        r = [0] * len(self.prime_order)
        for k, p in enumerate(self.prime_order):
            r[p] = k
        return tuple(r)

    def key(self, a: int) -> int:
        return sum(1 << self.rank[p] for p in bits(a))

    def less(self, a: int, b: int) -> bool:
        return self.key(a) < self.key(b)

    def rule_less(self, a: int, b: int) -> bool:
        """The defining rule: the greatest prime where supports differ lies below ``b``."""
        diff = a ^ b
        if not diff:
            return False
        top = max(bits(diff), key=lambda p: self.rank[p])
        return bool((b >> top) & 1)

    @property
    def full_order(self) -> list[int]:
        return sorted(self.algebra.elements, key=self.key)

    def to_json(self) -> dict:
        els = self.algebra.elements
        idx = self.algebra.index
        return {"prime_order": list(self.prime_order), "element_order": [idx[a] for a in self.full_order], "size": len(els)}


def _check_prime_order(h: HAlg, order: Sequence[int]) -> None:
    if sorted(order) != list(range(h.dual.n)):
        raise NotExtension("prime order must list every dual point once")
    rank = {p: k for k, p in enumerate(order)}
    for p in range(h.dual.n):
        for q in bits(h.dual.up[p] & ~(1 << p)):
            # p < q in the dual means up q is strictly below up p in the algebra
            if rank[q] > rank[p]:
                raise NotExtension(f"order puts {p} before {q} although up {q} < up {p}")


def natural_order(h: HAlg, prime_order: Sequence[int]) -> NatOrder:
    _check_prime_order(h, prime_order)
    return NatOrder(h, tuple(prime_order))


def all_natural_orders(h: HAlg, max_primes: int = MAX_PRIMES) -> list[NatOrder]:
    if h.dual.n > max_primes:
        raise SizeError(f"{h.dual.n} join-primes exceed the bound {max_primes}")
    return [NatOrder(h, ext) for ext in linear_extensions(h.dual.dual_order())]


def is_admissible(h: HAlg, element_order: Sequence[int]) -> bool:
    """Whether a total order on elements (least first) is natural."""
    target = list(element_order)
    return any(o.full_order == target for o in all_natural_orders(h))


def restricts_to(big: NatOrder, e: Hom, small: NatOrder) -> bool:
    """``e`` is an order embedding of ``small`` into ``big``."""
    keys = [big.key(e(a)) for a in small.full_order]
    return all(x < y for x, y in zip(keys, keys[1:]))


def restriction(big: NatOrder, e: Hom) -> list[int]:
    """The order induced on ``e.source`` (elements, least first)."""
    return sorted(e.source.elements, key=lambda a: big.key(e(a)))


def extend_order(e: Hom, o1: NatOrder) -> NatOrder:
    """A natural order on ``e.target`` that ``e`` embeds ``o1`` into."""
    h2 = e.target
    pi = e.dual
    p2 = h2.dual
    pairs = []
    for x in range(p2.n):
        for y in bits(p2.down[x] & ~(1 << x)):
            pairs.append((x, y))  # y < x in the dual: x comes first
        for y in range(p2.n):
            if o1.rank[pi.map[x]] < o1.rank[pi.map[y]]:
                pairs.append((x, y))
    order = next(linear_extensions(p2.n, pairs))
    return NatOrder(h2, order)


@dataclass(frozen=True)
class OrderedAmalgam:
    amalgam: Amalgam
    order: NatOrder
    method: str


def _base_orders_agree(d: Diagram, o1: NatOrder, o2: NatOrder) -> bool:
    return restriction(o1, d.e_b) == restriction(o2, d.e_c)


def ordered_amalgamate(d: Diagram, o1: NatOrder, o2: NatOrder) -> OrderedAmalgam:
    """Amalgam with a natural order restricting to ``o1`` and ``o2``.

    The prime order is a linear extension of the product of the two prime
    orders on the fibered-product dual (which already contains the reversed
    dual order).  The first extension is tried; if its restrictions fail,
    the two lexicographic products are tried, then further extensions.
    Raises IncompatibleOrders when none restricts to both inputs, which
    happens even for orders agreeing on the base.
    """
    am = superamalgamate(d)
    q = am.result.dual
    m1, m2 = am.into_left.dual.map, am.into_right.dual.map
    r1, r2 = o1.rank, o2.rank

    def ok(order: Sequence[int]) -> bool:
        o = NatOrder(am.result, tuple(order))
        return restricts_to(o, am.into_left, o1) and restricts_to(o, am.into_right, o2)

    pairs = [
        (u, v)
        for u in range(q.n)
        for v in range(q.n)
        if u != v and r1[m1[u]] <= r1[m1[v]] and r2[m2[u]] <= r2[m2[v]]
    ]
    exts = linear_extensions(q.n, pairs)
    first = next(exts)
    if ok(first):
        return OrderedAmalgam(am, NatOrder(am.result, first), "first-extension")
    if not _base_orders_agree(d, o1, o2):
        raise IncompatibleOrders("the two orders induce different orders on the base")
    for name, key in (
        ("lex-left", lambda u: (r1[m1[u]], r2[m2[u]])),
        ("lex-right", lambda u: (r2[m2[u]], r1[m1[u]])),
    ):
        order = tuple(sorted(range(q.n), key=key))
        if ok(order):
            return OrderedAmalgam(am, NatOrder(am.result, order), name)
    for order in itertools.islice(exts, EXTENSION_SEARCH_CAP):
        if ok(order):
            return OrderedAmalgam(am, NatOrder(am.result, order), "searched-extension")
    raise IncompatibleOrders("no natural order on the amalgam restricts to both orders")


# -- KPT witness ---------------------------------------------------------------


def _boolean(k: int) -> HAlg:
    return HAlg(Poset.antichain(k))


def kpt_witness() -> WitnessReport:
    """Conditions (i) and (ii) for the two- and three-atom Boolean algebras."""
    rep = WitnessReport("amenability")
    a_alg = rep.stage("A", _boolean(2))
    b_alg = rep.stage("B", _boolean(3))
    # A: atoms a = {0}, b = {1}; B: atoms x = {0}, y = {1}, z = {2}
    X, Y, Z = 0, 1, 2
    iota = {
        "<1": Hom(a_alg, b_alg, PMorphism(b_alg.dual, a_alg.dual, (0, 1, 1))),  # a->x, b->y|z
        "<2": Hom(a_alg, b_alg, PMorphism(b_alg.dual, a_alg.dual, (1, 0, 1))),  # a->y, b->x|z
    }
    orders_a = {"<1": natural_order(a_alg, (0, 1)), "<2": natural_order(a_alg, (1, 0))}
    orders_b = all_natural_orders(b_alg)
    if len(all_natural_orders(a_alg)) != 2 or len(orders_b) != 6:
        raise ConstructionError("orders", "unexpected number of admissible orders")
    prime = natural_order(b_alg, (Z, Y, X))
    names = {o.prime_order: "".join("xyz"[p] for p in o.prime_order) for o in orders_b}
    embeds = {
        (la, names[ob.prime_order]): restricts_to(ob, iota[la], orders_a[la]) for la in orders_a for ob in orders_b
    }
    # (i): under <' no admissible order on A is embedded by its own map
    cond_i = not any(restricts_to(prime, iota[la], orders_a[la]) for la in iota)
    # (ii): for the pair (<1, <2) some admissible <' defeats one of the two maps
    defeats = {names[ob.prime_order]: not (embeds["<1", names[ob.prime_order]] and embeds["<2", names[ob.prime_order]]) for ob in orders_b}
    cond_ii = any(defeats.values())
    rep.verdicts.update({"condition_i": cond_i, "condition_ii": cond_ii})
    rep.data.update(
        {
            "embeds": {f"{la} into {ob}": v for (la, ob), v in sorted(embeds.items())},
            "defeating_orders": sorted(k for k, v in defeats.items() if v),
            "fixed_order": "zyx",
        }
    )
    if not (cond_i and cond_ii):
        raise ConstructionError("kpt", f"conditions failed: (i)={cond_i}, (ii)={cond_ii}")
    return rep


# -- order-forgetfulness -------------------------------------------------------


def order_forgetful_counterexample() -> WitnessReport:
    rep = WitnessReport("forgetful")
    p2 = Poset(4, (0b0011, 0b0010, 0b1100, 0b1000))  # 0 < 1, 2 < 3
    p1 = Poset(3, (0b011, 0b010, 0b100))  # 0 < 1, isolated 2
    collapse = PMorphism(p2, p1, (0, 1, 2, 2))
    h = rep.stage("H", HAlg(p1))
    h2 = rep.stage("H'", HAlg(p2))
    e = Hom(h, h2, collapse)
    aut_h = automorphisms(h)
    aut_h2 = automorphisms(h2)
    a, b = 0b0011, 0b1100
    swaps = [f for f in aut_h2 if f(a) == b and f(b) == a]
    if len(aut_h) != 1 or not swaps:
        raise ConstructionError("automorphisms", f"|Aut(H)|={len(aut_h)}, swaps={len(swaps)}")
    phi = swaps[0]
    prec = next(o for o in all_natural_orders(h2) if o.less(a, b))
    # x <^phi y  iff  phi^-1(x) < phi^-1(y); phi is an involution here
    twisted = sorted(h2.elements, key=lambda x: prec.key(phi(x)))
    r1 = restriction(prec, e)
    r2 = sorted(h.elements, key=lambda x: twisted.index(e(x)))
    a_h, b_h = 0b011, 0b100  # e(a_h) = a, e(b_h) = b
    if e(a_h) != a or e(b_h) != b:
        raise ConstructionError("images", "a or b is not in the image of H")
    differ_at_ab = (r1.index(a_h) < r1.index(b_h)) != (r2.index(a_h) < r2.index(b_h))
    same_orbit = any(sorted(h.elements, key=lambda x: r1.index(f(x))) == r2 for f in aut_h)
    rep.verdicts.update(
        {
            "H_rigid": len(aut_h) == 1,
            "H'_has_two_automorphisms": len(aut_h2) == 2,
            "restrictions_admissible": is_admissible(h, r1) and is_admissible(h, r2),
            "restrictions_differ_at_ab": differ_at_ab,
            "different_orbits": not same_orbit,
        }
    )
    rep.data.update({"aut_H": len(aut_h), "aut_H'": len(aut_h2), "restriction_1": r1, "restriction_2": r2})
    if not all(rep.verdicts.values()):
        raise ConstructionError("forgetful", str(rep.verdicts))
    return rep
