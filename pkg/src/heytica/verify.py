"""Property suites run by ``heytica verify``.

Each suite returns a verdict plus a small detail payload.  ``verify_all``
runs the selected suites and times them.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import amalgam
from .amalgam import Diagram, random_configs, superamalgamate, verify_amalgam
from .catalog import algebras_up_to, embeddings_between, enumerate_posets, posets_up_to
from .envelope import (
    atomless_split,
    envelope,
    interior_laws,
    lift_hom,
    r_split,
    r_split_checks,
    regular_atoms_are_atoms,
    regular_elements,
    six_atom_witness,
)
from .errors import HeyticaError
from .heyting import HAlg, dual_of_pmorphism, dual_poset
from .limit import Chain, break_join_irreducible, densify, new_chain, saturate, unsatisfied_tasks
from .orderings import (
    all_natural_orders,
    extend_order,
    kpt_witness,
    order_forgetful_counterexample,
    ordered_amalgamate,
    restricts_to,
)
from .poset import PMorphism, Poset, enumerate_upsets, is_isomorphic, pmorphisms
from .witnesses import infinite_orbit_witness, roelcke_family


AXIOM_LEVEL = 2


@dataclass(frozen=True)
class Bounds:
    dual: int = 3
    posets: int = 5
    samples: int = 200
    seed: int = 0


# -- independent poset classifier ---------------------------------------------


def _relation_code(n: int, rel: set[tuple[int, int]], perm: tuple[int, ...]) -> tuple:
    return tuple(sorted((perm[i], perm[j]) for i, j in rel))


def brute_force_poset_count(n: int) -> int:
    """Count posets on ``n`` points by scanning naturally labelled strict
    orders and classifying them by their least relabelled relation."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    perms = list(itertools.permutations(range(n)))
    classes = set()
    for k in range(1 << len(pairs)):
        rel = {pairs[t] for t in range(len(pairs)) if (k >> t) & 1}
        if any((i, j) in rel and (j, l) in rel and (i, l) not in rel for i, j in rel for l in range(n)):
            continue
        classes.add(min(_relation_code(n, rel, p) for p in perms))
    return len(classes)


# -- suites ------------------------------------------------------------------


def suite_duality(b: Bounds) -> tuple[bool, dict]:
    n_ok = 0
    total = 0
    for p in posets_up_to(b.posets):
        h = HAlg(p)
        d, _ = dual_poset(h)
        total += 1
        n_ok += is_isomorphic(d, p) and HAlg(d).size() == h.size()
    return n_ok == total, {"posets": total}


def suite_map_duality(b: Bounds) -> tuple[bool, dict]:
    count = 0
    bad = 0
    ps = posets_up_to(min(b.dual, 3))
    for p in ps:
        for q in ps:
            for f in pmorphisms(p, q):
                fm = PMorphism(p, q, f)
                dual = dual_of_pmorphism(fm)
                count += 1
                if fm.is_injective() != dual.is_surjective() or fm.is_surjective() != dual.is_injective():
                    bad += 1
    return bad == 0, {"pmorphisms": count, "mismatches": bad}


def _diagrams(bound: int):
    algs = algebras_up_to(bound)
    for a in algs:
        for b_ in algs:
            legs_b = embeddings_between(a, b_)
            if not legs_b:
                continue
            for c in algs:
                for e_b in legs_b:
                    for e_c in embeddings_between(a, c):
                        yield Diagram.of(e_b, e_c)


def suite_independence(b: Bounds) -> tuple[bool, dict]:
    count = 0
    bad = 0
    for d in _diagrams(b.dual):
        am = superamalgamate(d)
        v = verify_amalgam(am)
        r = am.result
        lefts = [am.into_left(x) for x in d.b.elements]
        rights = [am.into_right(y) for y in d.c.elements]
        base = [am.into_left(d.e_b(z)) for z in d.a.elements]
        literal = amalgam.check_independence(r, lefts, base, rights)
        count += 1
        if not (v["commutes"] and v["independent"] and v["disjoint"] and v["embeddings"] and literal):
            bad += 1
    return bad == 0, {"diagrams": count, "failures": bad}


def _chain(b: Bounds) -> Chain:
    return saturate(new_chain(), min(b.dual, 3), 2)


def _axiom_host(b: Bounds) -> HAlg:
    ch = _chain(b)
    return ch.levels[min(AXIOM_LEVEL, ch.depth - 1)]


def suite_axioms(b: Bounds) -> tuple[bool, dict]:
    rep = amalgam.axiom_suite(random_configs(_axiom_host(b), b.samples, b.seed), seed=b.seed)
    axioms = {k: v for k, v in rep.summary()["axioms"].items() if k != "stationarity"}
    ok = all(v["checked"] == v["passed"] for v in axioms.values())
    return ok, {"configs": b.samples, "axioms": axioms}


def suite_stationarity(b: Bounds) -> tuple[bool, dict]:
    rep = amalgam.axiom_suite(random_configs(_axiom_host(b), b.samples, b.seed), seed=b.seed)
    st = rep.summary()["axioms"].get("stationarity", {"checked": 0, "passed": 0})
    return st["checked"] > 0 and st["checked"] == st["passed"], st


def suite_envelope(b: Bounds) -> tuple[bool, dict]:
    algs = algebras_up_to(b.dual)
    laws = all(all(interior_laws(envelope(h)).values()) for h in algs)
    commute = True
    for h1 in algs:
        for h2 in algs:
            for f in embeddings_between(h1, h2):
                bh = lift_hom(f)
                commute &= all(bh.commutes(s) for s in range(1 << h1.dual.n))
    split = True
    tested = 0
    for h in algs:
        for s in range(1, 1 << h.dual.n):
            ch = Chain([h])
            ch, s2 = atomless_split(ch, s)
            lifted = ch.lift(s, 0)
            split &= s2 != 0 and s2 & ~lifted == 0 and s2 != lifted
            tested += 1
    return laws and commute and split, {"laws": laws, "commutation": commute, "split": split, "split_inputs": tested}


def suite_regular(b: Bounds) -> tuple[bool, dict]:
    boolean = all(regular_elements(h).is_boolean() for h in algebras_up_to(max(b.dual, 4) if b.dual >= 3 else b.dual))
    count = 0
    ok = True
    for p in posets_up_to(min(b.posets, 5)):
        if not p.is_forest():
            continue
        h = HAlg(p)
        for x in range(p.n):
            if not p.lower_covers(x):
                continue
            a = p.up[x]
            rs = r_split(h, a)
            ok &= all(r_split_checks(h, a, rs).values())
            count += 1
    return boolean and ok, {"boolean": boolean, "r_split": ok, "r_split_inputs": count}


def suite_regular_atoms(b: Bounds) -> tuple[bool, dict]:
    algs = algebras_up_to(max(b.dual, 4) if b.dual >= 3 else b.dual)
    bad = [h.dual.n for h in algs if not regular_atoms_are_atoms(h)]
    return not bad, {"algebras": len(algs), "counterexamples": len(bad)}


def suite_hneg(b: Bounds) -> tuple[bool, dict]:
    rep = six_atom_witness()
    return rep.verdicts["joins_differ"], {"joins_differ": rep.verdicts["joins_differ"]}


def suite_six_atoms(b: Bounds) -> tuple[bool, dict]:
    rep = six_atom_witness()
    return rep.verdicts["six_atoms"], {"atoms": rep.data.get("atom_count")}


def suite_orderings(b: Bounds) -> tuple[bool, dict]:
    counts = True
    for k in range(1, 5):
        counts &= len(all_natural_orders(HAlg(Poset.chain(k)))) == 1
        counts &= len(all_natural_orders(HAlg(Poset.antichain(k)))) == len(list(itertools.permutations(range(k))))
    total = True
    for h in algebras_up_to(b.dual):
        for o in all_natural_orders(h):
            keys = [o.key(a) for a in h.elements]
            total &= len(set(keys)) == len(keys)
            total &= all(o.less(x, y) == o.rule_less(x, y) for x in h.elements for y in h.elements)
    ext = True
    n = 0
    algs = algebras_up_to(b.dual)
    for a in algs:
        for b_ in algs:
            for e in embeddings_between(a, b_):
                for o in all_natural_orders(a):
                    o2 = extend_order(e, o)
                    ext &= restricts_to(o2, e, o)
                    n += 1
    return counts and total and ext, {"counts": counts, "totality": total, "extend_order": ext, "extensions": n}


def suite_ordered_amalgamation(b: Bounds) -> tuple[bool, dict]:
    from .errors import IncompatibleOrders
    from .orderings import restriction

    ok = 0
    fail = 0
    for d in _diagrams(b.dual):
        for o1 in all_natural_orders(d.b):
            r1 = restriction(o1, d.e_b)
            for o2 in all_natural_orders(d.c):
                if restriction(o2, d.e_c) != r1:
                    continue
                try:
                    oa = ordered_amalgamate(d, o1, o2)
                except IncompatibleOrders:
                    fail += 1
                    continue
                good = restricts_to(oa.order, oa.amalgam.into_left, o1) and restricts_to(oa.order, oa.amalgam.into_right, o2)
                ok += good
                fail += not good
    return fail == 0, {"ordered_diagrams": ok + fail, "failures": fail}


def suite_kpt(b: Bounds) -> tuple[bool, dict]:
    try:
        rep = kpt_witness()
    except HeyticaError as exc:
        return False, {"error": str(exc)}
    return rep.ok, rep.verdicts


def suite_forgetful(b: Bounds) -> tuple[bool, dict]:
    try:
        rep = order_forgetful_counterexample()
    except HeyticaError as exc:
        return False, {"error": str(exc)}
    return rep.ok, rep.verdicts


def suite_roelcke(b: Bounds) -> tuple[bool, dict]:
    rep = roelcke_family(4)
    return rep.ok, rep.verdicts


def suite_orbit(b: Bounds) -> tuple[bool, dict]:
    rep = infinite_orbit_witness(None, [], 4)
    return rep.ok, rep.verdicts


def suite_limit(b: Bounds) -> tuple[bool, dict]:
    ch = _chain(b)
    sound = not unsatisfied_tasks(ch, min(b.dual, 3), 2)
    rng = random.Random(b.seed)
    h = ch.top
    els = list(enumerate_upsets(h.dual)) if h.dual.n <= 12 else None
    ok = True
    tried = 0
    for _ in range(min(b.samples, 200)):
        a = rng.choice(els) if els else h.interior(rng.getrandbits(h.dual.n))
        if a == h.one:
            continue
        bb = a | h.dual.up[rng.choice([p for p in range(h.dual.n) if not (a >> p) & 1])]
        c = Chain(list(ch.levels), list(ch.maps))
        c, m = densify(c, a, bb)
        lv = ch.depth - 1
        la, lb = c.lift(a, lv), c.lift(bb, lv)
        ok &= la & ~m == 0 and m & ~lb == 0 and m not in (la, lb)
        if bb:
            c = Chain(list(ch.levels), list(ch.maps))
            c, x, y = break_join_irreducible(c, bb)
            lb = c.lift(bb, lv)
            ok &= (x | y) == lb and x != lb and y != lb
        tried += 1
    return sound and ok, {"saturation_sound": sound, "inputs": tried, "levels": [l.dual.n for l in ch.levels]}


def suite_catalog(b: Bounds) -> tuple[bool, dict]:
    n = min(b.posets, 5)
    counts = [len(enumerate_posets(k)) for k in range(1, n + 1)]
    oracle = [brute_force_poset_count(k) for k in range(1, n + 1)]
    return counts == oracle, {"counts": counts, "oracle": oracle}


SUITES: dict[str, Callable[[Bounds], tuple[bool, dict]]] = {
    "duality": suite_duality,
    "map_duality": suite_map_duality,
    "independence": suite_independence,
    "axioms": suite_axioms,
    "stationarity": suite_stationarity,
    "envelope": suite_envelope,
    "regular": suite_regular,
    "regular_atoms": suite_regular_atoms,
    "hneg": suite_hneg,
    "six_atoms": suite_six_atoms,
    "orderings": suite_orderings,
    "ordered_amalgamation": suite_ordered_amalgamation,
    "kpt": suite_kpt,
    "forgetful": suite_forgetful,
    "roelcke": suite_roelcke,
    "orbit": suite_orbit,
    "limit": suite_limit,
    "catalog": suite_catalog,
}


def verify_all(bounds: Bounds | None = None, only: list[str] | None = None, skip: list[str] | None = None) -> dict:
    """Run the suites; the payload lists each suite's verdict and runtime."""
    bounds = bounds or Bounds()
    names = [s for s in SUITES if (not only or s in only) and s not in (skip or [])]
    results = []
    for name in names:
        t0 = time.perf_counter()
        try:
            verdict, detail = SUITES[name](bounds)
        except HeyticaError as exc:
            verdict, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append(
            {
                "suite": name,
                "scale": {"dual": bounds.dual, "posets": bounds.posets, "samples": bounds.samples},
                "verdict": bool(verdict),
                "runtime": round(time.perf_counter() - t0, 3),
                "detail": detail,
            }
        )
    return {
        "ok": all(r["verdict"] for r in results),
        "failed": [r["suite"] for r in results if not r["verdict"]],
        "suites": results,
    }
