"""Superamalgamation of embedding diagrams and the independence relation.

An amalgam of ``B <- A -> C`` is built on the dual side as the fibered
product of the two dual surjections, then checked for commutation, for
independence (every comparison between the two images is interpolated by
the common image) and for disjointness of the image differences.
"""

from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import IndependenceFailure, NotHomomorphism, SizeError, TargetMismatch
from .heyting import HAlg, Hom, closure, generated_partial_map, generated_subalgebra
from .poset import PMorphism, Poset, bits, canonical_form, fibered_product, is_pmorphism, mask_of

log = logging.getLogger(__name__)

# image differences are compared element by element only below this size
_BRUTE_ELEMENTS = 4096
FALLBACK_POINT_BOUND = 12


@dataclass(frozen=True)
class Diagram:
    """``B <- A -> C`` with two embeddings ``e_b: A -> B`` and ``e_c: A -> C``."""

    a: HAlg
    b: HAlg
    c: HAlg
    e_b: Hom
    e_c: Hom

    def __post_init__(self) -> None:
        for name, e, tgt in (("e_b", self.e_b, self.b), ("e_c", self.e_c, self.c)):
            if e.source != self.a or e.target != tgt:
                raise TargetMismatch(f"{name} does not connect the diagram's algebras")
            if not e.is_injective():
                raise NotHomomorphism(f"{name} is not an embedding")

    @classmethod
    def of(cls, e_b: Hom, e_c: Hom) -> "Diagram":
        return cls(e_b.source, e_b.target, e_c.target, e_b, e_c)


@dataclass(frozen=True)
class Amalgam:
    result: HAlg
    into_left: Hom
    into_right: Hom
    diagram: Diagram
    verdicts: dict = field(default_factory=dict, compare=False)

    @property
    def base_map(self) -> Hom:
        return self.diagram.e_b.then(self.into_left)


# -- independence ------------------------------------------------------------


def check_independence(h: HAlg, s: Iterable[int], u: Iterable[int], t: Iterable[int]) -> bool:
    """Every comparison between ``s`` and ``t`` is interpolated by ``u``."""
    s, u, t = list(s), list(u), list(t)
    for a in s:
        for b in t:
            if h.leq(a, b) and not any(h.leq(a, c) and h.leq(c, b) for c in u):
                return False
            if h.leq(b, a) and not any(h.leq(b, c) and h.leq(c, a) for c in u):
                return False
    return True


def independence_counterexample(h: HAlg, s: Sequence[int], u: Sequence[int], t: Sequence[int]) -> tuple[int, int] | None:
    for a in s:
        for b in t:
            for x, y in ((a, b), (b, a)):
                if h.leq(x, y) and not any(h.leq(x, c) and h.leq(c, y) for c in u):
                    return (a, b)
    return None


def _meet_irreducibles(h: HAlg) -> list[int]:
    return [h.one & ~h.dual.down[p] for p in range(h.dual.n)]


def images_independent(left: Hom, right: Hom, base_left: Hom, base_right: Hom) -> tuple[int, int] | None:
    """Fast independence test for two embeddings into one algebra.

    Comparisons only need checking between join-primes on one side and
    meet-irreducibles on the other: interpolants of a family combine by
    joins (for the lower element) and meets (for the upper one).  The least
    base element above ``x`` in the left algebra is the image of ``x``
    under the dual map, so interpolation reduces to one comparison.
    Returns ``None`` or a counterexample pair of result elements.
    """
    r = left.target
    for lo, hi, blo in ((left, right, base_left), (right, left, base_right)):
        src, other = lo.source, hi.source
        primes = [src.dual.up[p] for p in range(src.dual.n)]
        coprimes = _meet_irreducibles(other)
        lo_imgs = [lo(x) for x in primes]
        hi_imgs = [hi(y) for y in coprimes]
        # least base element above x, transported into the result
        covers = [base_of(blo, lo, x) for x in primes]
        for x_img, cov in zip(lo_imgs, covers):
            for y_img in hi_imgs:
                if r.leq(x_img, y_img) and not r.leq(cov, y_img):
                    return (x_img, y_img)
    return None


def base_of(base: Hom, leg: Hom, x: int) -> int:
    """Image in the result of the least base element above ``x``.

    ``base: A -> leg.source`` is an embedding; its least element above ``x``
    is the up-set ``base.dual[x]`` of ``A``'s dual.
    """
    least = base.dual.image(x)
    return leg(base(least))


def _images_disjoint(am: Amalgam) -> bool:
    d = am.diagram
    lefts = {am.into_left(x) for x in d.b.elements}
    rights = {am.into_right(y) for y in d.c.elements}
    base = {am.into_left(d.e_b(z)) for z in d.a.elements}
    return (lefts & rights) <= base


def verify_amalgam(am: Amalgam) -> dict:
    """Commutation, independence and disjoint image differences."""
    d = am.diagram
    commutes = d.e_b.then(am.into_left) == d.e_c.then(am.into_right)
    bad = images_independent(am.into_left, am.into_right, d.e_b, d.e_c)
    small = d.b.size(_BRUTE_ELEMENTS) <= _BRUTE_ELEMENTS and d.c.size(_BRUTE_ELEMENTS) <= _BRUTE_ELEMENTS
    # independence already forces disjointness (x <= x needs a base interpolant)
    disjoint = _images_disjoint(am) if small else bad is None
    return {
        "commutes": commutes,
        "independent": bad is None,
        "disjoint": disjoint,
        "counterexample": bad,
        "embeddings": am.into_left.is_injective() and am.into_right.is_injective(),
    }


def superamalgamate(d: Diagram, *, verify: bool = True, point_bound: int | None = None) -> Amalgam:
    """Amalgam of ``d`` dual to the fibered product of its two dual surjections."""
    pi1, pi2 = d.e_b.dual, d.e_c.dual
    if point_bound is not None:
        # the fibered product has sum over base points of fibre products
        size = sum(
            len([u for u in range(pi1.source.n) if pi1.map[u] == p]) * len([v for v in range(pi2.source.n) if pi2.map[v] == p])
            for p in range(pi1.target.n)
        )
        if size > point_bound:
            raise SizeError(f"amalgam dual would have {size} > {point_bound} points")
    q, pr1, pr2 = fibered_product(pi1, pi2)
    result = HAlg(q)
    am = Amalgam(result, Hom(d.b, result, pr1), Hom(d.c, result, pr2), d)
    if not verify:
        return am
    v = verify_amalgam(am)
    am.verdicts.update(v)
    if v["commutes"] and v["independent"] and v["disjoint"]:
        return am
    log.warning("fibered product failed its amalgam checks (%s); searching sub-posets", v)
    found = _fallback(d, q, pr1, pr2)
    if found is None:
        raise IndependenceFailure(v["counterexample"] or (0, 0), "no independent amalgam within the fallback bound")
    return found


def _fallback(d: Diagram, q: Poset, pr1: PMorphism, pr2: PMorphism) -> Amalgam | None:
    if q.n > FALLBACK_POINT_BOUND:
        return None
    for k in range(1, q.n + 1):
        for pts in itertools.combinations(range(q.n), k):
            sub, idx = q.induced(mask_of(pts))
            m1 = tuple(pr1.map[i] for i in idx)
            m2 = tuple(pr2.map[i] for i in idx)
            if not (is_pmorphism(m1, sub, pr1.target) and is_pmorphism(m2, sub, pr2.target)):
                continue
            if len(set(m1)) < pr1.target.n or len(set(m2)) < pr2.target.n:
                continue
            r = HAlg(sub)
            am = Amalgam(r, Hom(d.b, r, PMorphism(sub, pr1.target, m1)), Hom(d.c, r, PMorphism(sub, pr2.target, m2)), d)
            v = verify_amalgam(am)
            if v["commutes"] and v["independent"] and v["disjoint"]:
                am.verdicts.update(v, fallback=True)
                return am
    return None


# -- the ternary relation ----------------------------------------------------


def indep_rel(h: HAlg, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> bool:
    """``<AB>`` and ``<BC>`` are independent over ``<B>``."""
    a, b, c = list(a), list(b), list(c)
    left = closure(h, a + b)
    base = closure(h, b)
    right = closure(h, b + c)
    return check_independence(h, left, base, right)


# -- stationarity ------------------------------------------------------------


def _marks_for(e: Hom) -> list[int]:
    # images of join-primes determine a lattice embedding completely
    return [e(e.source.dual.up[p]) for p in range(e.source.dual.n)]


def amalgam_type(e1: Hom, e2: Hom) -> bytes:
    """Canonical code of the target with both images distinguished."""
    return canonical_form(e1.target.dual, _marks_for(e1) + _marks_for(e2))


def _generates(e1: Hom, e2: Hom) -> bool:
    h = e1.target
    gens = {e1(x) for x in e1.source.elements} | {e2(y) for y in e2.source.elements}
    return len(closure(h, gens)) == h.size()


def stationarity_check(
    a0: HAlg,
    a1: HAlg,
    a2: HAlg,
    legs: tuple[Hom, Hom],
    bound: int | None = None,
) -> bool:
    """Whether all independent amalgams of the diagram are isomorphic over it.

    Searches every algebra with at most ``bound`` elements (default: twice
    the fibered-product amalgam) for pairs of embeddings of ``a1`` and
    ``a2`` that agree on ``a0``, whose images generate the algebra and are
    independent over the image of ``a0``.  These are classified by
    canonical form with both images marked.
    """
    from .catalog import algebras_with_at_most, embeddings_between

    l1, l2 = legs
    d = Diagram(a0, a1, a2, l1, l2)
    if bound is None:
        bound = 2 * superamalgamate(d, verify=False).result.size()
    types: set[bytes] = set()
    for e in algebras_with_at_most(bound):
        if e.size() < max(a1.size(), a2.size()):
            continue
        emb1 = embeddings_between(a1, e)
        if not emb1:
            continue
        emb2 = embeddings_between(a2, e)
        for f1 in emb1:
            base1 = l1.then(f1).dual.map
            for f2 in emb2:
                if l2.then(f2).dual.map != base1:
                    continue
                if images_independent(f1, f2, l1, l2) is not None:
                    continue
                if not _generates(f1, f2):
                    continue
                types.add(amalgam_type(f1, f2))
                if len(types) > 1:
                    return False
    if not types:
        raise SizeError(f"no independent amalgam with at most {bound} elements")
    return True


# -- axiom suite -------------------------------------------------------------


@dataclass(frozen=True)
class Config:
    """Four finite element sets inside one algebra."""

    host: HAlg
    a: tuple[int, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    d: tuple[int, ...] = ()

    def code(self) -> tuple:
        parts = (self.a, self.b, self.c, self.d)
        marks = [x for part in parts for x in part]
        return tuple(map(len, parts)), canonical_form(self.host.dual, marks)


@dataclass
class AxiomReport:
    results: dict[str, list[bool]] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    runtime: float = 0.0

    def record(self, axiom: str, ok: bool, cfg: Config | None = None) -> None:
        self.results.setdefault(axiom, []).append(ok)
        if not ok:
            self.failures.append({"axiom": axiom, "config": None if cfg is None else _cfg_json(cfg)})

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {
            "axioms": {k: {"checked": len(v), "passed": sum(v)} for k, v in sorted(self.results.items())},
            "failures": self.failures,
            "passed": self.passed,
        }


def _cfg_json(cfg: Config) -> dict:
    return {k: [list(bits(x)) for x in getattr(cfg, k)] for k in ("a", "b", "c", "d")}


def random_element(h: HAlg, rng: random.Random) -> int:
    """A random up-set: the up-closure of a few random points."""
    k = rng.randint(1, max(1, min(3, h.dual.n)))
    pts = rng.sample(range(h.dual.n), k)
    return h.dual.up_closure(mask_of(pts))


def _small_pool(h: HAlg, limit: int = 3) -> list[int]:
    """Elements generating at most ``limit`` elements (by default a 3-chain)."""
    pool = []
    for x in h.elements:
        try:
            closure(h, [x], bound=limit)
        except SizeError:
            continue
        if x not in (h.zero, h.one):
            pool.append(x)
    return pool


def random_configs(h: HAlg, count: int, seed: int = 0, small_fraction: float = 0.5) -> list[Config]:
    """Seeded configurations; a share of them draws from elements with small
    generated subalgebras so that the exhaustive stationarity search applies."""
    rng = random.Random(seed)
    pool = _small_pool(h) if h.size(4096) <= 4096 else []
    out = []
    for _ in range(count):
        small = bool(pool) and rng.random() < small_fraction
        pick = (lambda: rng.choice(pool)) if small else (lambda: random_element(h, rng))
        sizes = [1, rng.randint(0, 1), 1, 1]
        a, b, c, d = (tuple(pick() for _ in range(s)) for s in sizes)
        out.append(Config(h, a, b, c, d))
    return out


def _relabel(cfg: Config, rng: random.Random) -> Config:
    n = cfg.host.dual.n
    perm = list(range(n))
    rng.shuffle(perm)
    p2 = cfg.host.dual.relabel(perm)
    move = lambda x: mask_of(perm[i] for i in bits(x))  # noqa: E731
    h2 = HAlg(p2)
    return Config(h2, *(tuple(move(x) for x in getattr(cfg, k)) for k in ("a", "b", "c", "d")))


def _sub_inclusion(h: HAlg, gens: Sequence[int], bound: int) -> tuple[HAlg, Hom]:
    return generated_subalgebra(h, gens, bound)


def _existence(cfg: Config, bound: int) -> bool:
    """An independent copy of ``A`` over ``B`` appears after one amalgamation."""
    h = cfg.host
    base, ib = _sub_inclusion(h, cfg.b, bound)
    left, il = _sub_inclusion(h, list(cfg.a) + list(cfg.b), bound)
    # base -> left by restriction of inclusions
    into_left = Hom.from_map(base, left, {x: _pull(il, ib(x)) for x in base.elements})
    am = superamalgamate(Diagram.of(into_left, ib))
    r = am.result
    a_copy = [am.into_left(_pull(il, x)) for x in cfg.a]
    b_img = [am.into_right(x) for x in cfg.b]
    c_img = [am.into_right(x) for x in cfg.c]
    same_type = generated_partial_map(h, list(zip(list(cfg.a) + list(cfg.b), a_copy + b_img)), r) is not None
    return same_type and indep_rel(r, a_copy, b_img, c_img)


def _pull(inc: Hom, x: int) -> int:
    """The element of ``inc.source`` sent to ``x`` (which must be in the image)."""
    y = inc.dual.image(x)
    if inc(y) != x:
        raise NotHomomorphism("element is not in the image")
    return y



def _stationarity(cfg: Config, cache: dict, bound: int) -> bool | None:
    """Over-base classification for the diagram ``<AB> <- <B> -> <BC>``.

    Returns ``None`` when the search would exceed ``bound`` elements.
    """
    h = cfg.host
    try:
        base, ib = _sub_inclusion(h, cfg.b, bound)
        left, il = _sub_inclusion(h, list(cfg.a) + list(cfg.b), bound)
        right, ir = _sub_inclusion(h, list(cfg.b) + list(cfg.c), bound)
    except SizeError:
        return None
    l1 = Hom.from_map(base, left, {x: _pull(il, ib(x)) for x in base.elements})
    l2 = Hom.from_map(base, right, {x: _pull(ir, ib(x)) for x in base.elements})
    am = superamalgamate(Diagram(base, left, right, l1, l2), verify=False)
    limit = 2 * am.result.size(bound)
    if limit > bound:
        return None
    marks = _marks_for(am.into_left) + _marks_for(am.into_right) + _marks_for(l1.then(am.into_left))
    key = (left.dual.n, right.dual.n, canonical_form(am.result.dual, marks))
    if key not in cache:
        cache[key] = stationarity_check(base, left, right, (l1, l2), bound=limit)
    return cache[key]


def axiom_suite(
    configs: Sequence[Config],
    *,
    seed: int = 0,
    stationarity_bound: int = 12,
    subalgebra_bound: int = 4096,
) -> AxiomReport:
    """Check the stationary-independence axioms on each configuration."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    rep = AxiomReport()
    cache: dict = {}
    verdicts: dict[tuple, bool] = {}
    for cfg in configs:
        h = cfg.host
        a, b, c, d = map(list, (cfg.a, cfg.b, cfg.c, cfg.d))
        v = indep_rel(h, a, b, c)
        # invariance: relabelled copy, and canonical bookkeeping
        moved = _relabel(cfg, rng)
        rep.record("invariance", indep_rel(moved.host, moved.a, moved.b, moved.c) == v, cfg)
        code = Config(h, cfg.a, cfg.b, cfg.c).code()
        if code in verdicts:
            rep.record("invariance", verdicts[code] == v, cfg)
        verdicts[code] = v
        rep.record("symmetry", indep_rel(h, c, b, a) == v, cfg)
        # monotonicity: A _|_B CD  =>  A _|_B C  and  A _|_BC D ; smaller A stays independent
        if indep_rel(h, a, b, c + d):
            rep.record("monotonicity", indep_rel(h, a, b, c) and indep_rel(h, a, b + c, d), cfg)
        if v and a:
            rep.record("monotonicity", indep_rel(h, a[:-1], b, c), cfg)
        # transitivity: A _|_B C and A _|_BC D  =>  A _|_B CD (hence A _|_B D)
        if v and indep_rel(h, a, b + c, d):
            rep.record("transitivity", indep_rel(h, a, b, c + d) and indep_rel(h, a, b, d), cfg)
        rep.record("existence", _existence(cfg, subalgebra_bound), cfg)
        st = _stationarity(cfg, cache, stationarity_bound)
        if st is not None:
            rep.record("stationarity", st, cfg)
    rep.runtime = time.perf_counter() - t0
    return rep
