"""Witness families for the non-Roelcke-precompactness and orbit arguments.

The free one-generated algebra is never built.  Its finite quotients are
exactly the finite one-generated algebras, which are harvested from the
catalog together with a designated generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .catalog import algebras_up_to
from .errors import ConstructionError, InsufficientFamily, SizeError
from .heyting import HAlg, add_bottom, closure, element_to_json, generated_partial_map, generated_subalgebra
from .limit import Chain, extend_by_pmorphism, extend_partial_iso, new_chain, saturate
from .poset import PMorphism, adjoin_point, canonical_form, mask_of
from .report import WitnessReport
from .terms import eval_term, star_term, terms_up_to

__all__ = [
    "OneGenerated",
    "WitnessReport",
    "one_generated_family",
    "roelcke_family",
    "infinite_orbit_witness",
]

TERM_CHECK_DEPTH = 2


@dataclass(frozen=True)
class OneGenerated:
    algebra: HAlg
    generator: int

    def code(self) -> bytes:
        return canonical_form(self.algebra.dual, [self.generator])


def _is_chain(h: HAlg, els: list[int]) -> bool:
    return all(h.leq(a, b) or h.leq(b, a) for a, b in itertools.combinations(els, 2))


def one_generated_family(max_dual: int) -> list[OneGenerated]:
    """Catalog algebras with a generator outside ``{0, 1}``, one per
    isomorphism type of (algebra, generator); least generator chosen."""
    if max_dual < 2:
        return []
    out: list[OneGenerated] = []
    seen: set[bytes] = set()
    for h in algebras_up_to(max_dual):
        size = len(h.elements)
        for x in sorted(h.elements):
            if x in (h.zero, h.one):
                continue
            if len(closure(h, [x], bound=size)) != size:
                continue
            member = OneGenerated(h, x)
            code = member.code()
            if code not in seen:
                seen.add(code)
                out.append(member)
    return out


def _star_checks(m: OneGenerated) -> tuple[HAlg, int, int, dict[str, bool]]:
    h, x = m.algebra, m.generator
    hs, z0 = add_bottom(h)
    xs = x | z0
    n = len(hs.elements)
    gen_x = closure(hs, [xs])
    gen_z = closure(hs, [z0])
    terms_ok = all(
        eval_term(star_term(t), hs, {"x": xs, "y": z0}) == eval_term(t, h, {"x": x}) | z0
        for t in terms_up_to(TERM_CHECK_DEPTH)
    )
    checks = {
        "generated_by_x_and_old_zero": len(closure(hs, [xs, z0], bound=n)) == n,
        "x_generates_3_chain": len(gen_x) == 3 and _is_chain(hs, gen_x),
        "old_zero_generates_3_chain": len(gen_z) == 3 and _is_chain(hs, gen_z),
        "star_terms_agree": terms_ok,
    }
    return hs, xs, z0, checks


def roelcke_family(n: int, max_dual: int = 5) -> WitnessReport:
    """``n`` star algebras, each 2-generated, pairwise non-isomorphic as
    2-generated structures, with every single generator spanning a 3-chain."""
    fam = one_generated_family(max_dual)
    if len(fam) < n:
        raise InsufficientFamily(f"only {len(fam)} one-generated types with dual <= {max_dual}; raise the bound")
    rep = WitnessReport("roelcke")
    members = []
    codes = []
    all_checks: dict[str, bool] = {}
    for i, m in enumerate(fam[:n]):
        rep.stage(f"L{i}", m.algebra)
        hs, xs, z0, checks = _star_checks(m)
        rep.stage(f"L{i}*", hs)
        codes.append(canonical_form(hs.dual, [xs, z0]))
        for k, v in checks.items():
            all_checks[k] = all_checks.get(k, True) and v
        members.append(
            {
                "size": len(m.algebra.elements),
                "star_size": len(hs.elements),
                "generator": m.algebra.index[m.generator],
                "star_generators": [hs.index[xs], hs.index[z0]],
                "term": "unlabelled",
                "checks": checks,
            }
        )
    rep.verdicts.update(all_checks)
    rep.verdicts["pairwise_non_isomorphic"] = len(set(codes)) == len(codes)
    rep.data.update({"members": members, "available_types": len(fam), "max_dual": max_dual})
    return rep


# -- infinite orbit ----------------------------------------------------------


def _is_join_prime_in(h: HAlg, gens: list[int], a: int) -> bool:
    sub, inc = generated_subalgebra(h, gens)
    local = inc.dual.image(a)
    return inc(local) == a and any(local == sub.dual.up[p] for p in range(sub.dual.n))


def infinite_orbit_witness(chain: Chain | None = None, S: list[int] | None = None, k: int = 4) -> WitnessReport:
    """Fresh join-prime elements ``a_0 .. a_k`` over ``S`` and partial
    isomorphisms ``a_i -> a_(i+1)`` fixing ``S``, each extended one step."""
    if chain is None:
        chain = new_chain()
    S = list(S or [])
    for s in S:
        chain.top.check(s)
    rep = WitnessReport("orbit")
    base_level = chain.depth - 1
    top0 = chain.top
    m0 = top0.dual.maximal()[0]
    elems: list[int] = []  # a_0 .. a_i in the current top

    def relift(old_depth: int) -> None:
        nonlocal S, elems
        S = [chain.lift(s, old_depth - 1) for s in S]
        elems = [chain.lift(a, old_depth - 1) for a in elems]

    for i in range(k + 1):
        top = chain.top
        to_base = chain.to_level(base_level)
        used_bits = 0
        for a in elems:
            used_bits |= a
        m = next(u for u in top.dual.maximal() if to_base[u] == m0 and not (used_bits >> u) & 1)
        q, t = adjoin_point(top.dual)
        pi = PMorphism(q, top.dual, tuple(range(top.dual.n)) + (m,))
        d = chain.depth
        chain, into = extend_by_pmorphism(chain, pi)
        relift(d)
        a = mask_of(u for u in range(chain.top.dual.n) if into.map[u] == t)
        elems.append(a)
    h = chain.top
    fresh = [a not in closure(h, S + elems[:i]) for i, a in enumerate(elems)]
    prime = [_is_join_prime_in(h, S + elems[: i + 1], a) for i, a in enumerate(elems)]
    types = []
    for a in elems:
        sub, inc = generated_subalgebra(h, [a])
        types.append(canonical_form(sub.dual, [inc.dual.image(a)]))
    isos = []
    extended = []
    for i in range(k):
        pairs = [(s, s) for s in S] + [(elems[i], elems[i + 1])]
        p = generated_partial_map(chain.top, pairs)
        isos.append(p is not None)
        if p is None:
            extended.append(False)
            continue
        d = chain.depth
        target = elems[(i + 2) % len(elems)]
        try:
            chain, p2 = extend_partial_iso(chain, p, target)
        except SizeError:
            extended.append(False)
            continue
        relift(d)
        ok = all(p2.get(s) == s for s in S) and p2.get(elems[i]) == elems[i + 1]
        ok = ok and generated_partial_map(chain.top, list(p2.items())) is not None
        extended.append(ok)
    rep.stage("start", top0)
    rep.stage("final", chain.top)
    rep.verdicts.update(
        {
            "fresh": all(fresh),
            "join_prime": all(prime),
            "distinct": len(set(elems)) == len(elems),
            "equal_types": len(set(types)) == 1,
            "partial_isos": all(isos),
            "isos_extend": all(extended),
        }
    )
    rep.data.update(
        {
            "k": k,
            "levels": chain.depth,
            "top_points": chain.top.dual.n,
            "S_size": len(S),
            "elements": [element_to_json(a) for a in elems],
        }
    )
    if len(elems) != k + 1:
        raise ConstructionError("orbit", "wrong number of elements")
    return rep


def default_orbit_chain(bound: int = 3, rounds: int = 2) -> Chain:
    return saturate(new_chain(), bound, rounds)
