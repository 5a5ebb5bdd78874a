"""Finite approximations of the Fraisse limit of finite Heyting algebras.

A :class:`Chain` is a tower ``L_0 <= L_1 <= ...`` of finite algebras.  Each
connecting embedding is stored by its dual surjection from the next level's
dual onto the previous one.  Every growth step is a superamalgamation over
the current top level.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .amalgam import Diagram, _marks_for, superamalgamate
from .catalog import algebras_up_to, embeddings_between
from .envelope import BoolHom, double_upset, envelope, lift_hom
from .errors import NotHomomorphism, SizeError
from .heyting import TWO, HAlg, Hom, generated_partial_map, generated_subalgebra
from .poset import PMorphism, Poset, bits, canonical_form, mask_of, poset_from_json, poset_to_json, split_point

log = logging.getLogger(__name__)

DEFAULT_POINT_BOUND = 4096
DEFAULT_LEVEL_BOUND = 40
SEARCH_BUDGET = 200_000


@dataclass(frozen=True)
class ExtensionTask:
    """Realize ``ext: A -> B`` over the embedding ``base: A -> L_level``."""

    ext: Hom
    base: Hom
    level: int

    def key(self) -> tuple:
        marks = _marks_for(self.ext)
        return (self.level, canonical_form(self.ext.target.dual, marks), self.base.dual.map, self.ext.source.dual)


@dataclass
class Chain:
    levels: list[HAlg]
    maps: list[PMorphism] = field(default_factory=list)
    queue: deque = field(default_factory=deque)
    point_bound: int = DEFAULT_POINT_BOUND
    level_bound: int = DEFAULT_LEVEL_BOUND
    realized: int = 0
    skipped: int = 0

    @property
    def top(self) -> HAlg:
        return self.levels[-1]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def to_level(self, i: int) -> tuple[int, ...]:
        """Dual map from the top level's points to level ``i``'s points."""
        m = tuple(range(self.top.dual.n))
        for j in range(self.depth - 2, i - 1, -1):
            step = self.maps[j].map
            m = tuple(step[v] for v in m)
        return m

    def embedding(self, i: int, j: int | None = None) -> Hom:
        """Connecting embedding ``L_i -> L_j`` (default: the top)."""
        j = self.depth - 1 if j is None else j
        m = tuple(range(self.levels[j].dual.n))
        for k in range(j - 1, i - 1, -1):
            step = self.maps[k].map
            m = tuple(step[v] for v in m)
        return Hom(self.levels[i], self.levels[j], PMorphism(self.levels[j].dual, self.levels[i].dual, m))

    def lift(self, x: int, i: int) -> int:
        """Image in the top level of the element (or subset) ``x`` of level ``i``."""
        m = self.to_level(i)
        return mask_of(u for u, v in enumerate(m) if (x >> v) & 1)

    lift_subset = lift

    def append(self, level: HAlg, dual_map: PMorphism) -> None:
        if dual_map.source != level.dual or dual_map.target != self.top.dual:
            raise NotHomomorphism("connecting map does not fit the chain")
        if not dual_map.is_surjective():
            raise NotHomomorphism("connecting map is not an embedding")
        if level.dual.n > self.point_bound:
            raise SizeError(f"level with {level.dual.n} dual points exceeds {self.point_bound}")
        if self.depth >= self.level_bound:
            raise SizeError(f"chain already has {self.depth} levels")
        self.levels.append(level)
        self.maps.append(dual_map)

    def envelope_step(self, i: int) -> BoolHom:
        """``B(L_i) -> B(L_{i+1})`` lifted from the connecting embedding."""
        return lift_hom(Hom(self.levels[i], self.levels[i + 1], self.maps[i]))

    def to_json(self) -> dict:
        return {
            "levels": [poset_to_json(h.dual) for h in self.levels],
            "maps": [list(m.map) for m in self.maps],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Chain":
        levels = [HAlg(poset_from_json(p)) for p in obj["levels"]]
        maps = [PMorphism(levels[i + 1].dual, levels[i].dual, tuple(m)) for i, m in enumerate(obj["maps"])]
        return cls(levels, maps)


def new_chain(point_bound: int = DEFAULT_POINT_BOUND, level_bound: int = DEFAULT_LEVEL_BOUND) -> Chain:
    return Chain([TWO], point_bound=point_bound, level_bound=level_bound)


# -- growth ------------------------------------------------------------------


def _base_to_top(chain: Chain, task: ExtensionTask) -> Hom:
    m = chain.to_level(task.level)
    gm = task.base.dual.map
    return Hom(task.base.source, chain.top, PMorphism(chain.top.dual, task.base.source.dual, tuple(gm[v] for v in m)))


def realize_with_embedding(chain: Chain, task: ExtensionTask) -> Hom:
    """Realize ``task``; returns the new embedding of ``task.ext.target``."""
    g = _base_to_top(chain, task)
    am = superamalgamate(Diagram.of(g, task.ext), point_bound=chain.point_bound)
    chain.append(am.result, am.into_left.dual)
    chain.realized += 1
    return am.into_right


def realize(chain: Chain, task: ExtensionTask) -> Chain:
    realize_with_embedding(chain, task)
    return chain


def _find_compatible(top: Poset, target: Poset, allowed: Sequence[int], budget: int) -> tuple[int, ...] | None:
    """Surjective p-morphism ``top -> target`` inside ``allowed``; ``None``
    if none exists or the search budget runs out."""
    order = sorted(range(top.n), key=lambda i: (-top.heights[i], i))
    f = [-1] * top.n
    steps = 0

    class Budget(Exception):
        pass

    def rec(k: int, used: int) -> tuple[int, ...] | None:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise Budget
        if k == top.n:
            return tuple(f) if used == target.full else None
        if (target.full & ~used).bit_count() > top.n - k:
            return None
        u = order[k]
        s = 0
        for w in bits(top.up[u] & ~(1 << u)):
            s |= 1 << f[w]
        # prefer points not yet covered, to reach surjectivity early
        cands = [c for c in bits(allowed[u]) if target.up[c] == s | (1 << c)]
        cands.sort(key=lambda c: (used >> c) & 1)
        for c in cands:
            f[u] = c
            r = rec(k + 1, used | (1 << c))
            if r is not None:
                return r
        f[u] = -1
        return None

    try:
        return rec(0, 0)
    except (Budget, RecursionError):
        return None


def compatible_embedding(chain: Chain, task: ExtensionTask, budget: int = SEARCH_BUDGET) -> Hom | None:
    """An embedding of ``task.ext.target`` into the top agreeing with the base."""
    g = _base_to_top(chain, task).dual.map
    pi = task.ext.dual.map
    b = task.ext.target.dual
    fibres = [mask_of(v for v in range(b.n) if pi[v] == a) for a in range(task.ext.source.dual.n)]
    allowed = [fibres[g[u]] for u in range(chain.top.dual.n)]
    found = _find_compatible(chain.top.dual, b, allowed, budget)
    if found is None:
        return None
    return Hom(task.ext.target, chain.top, PMorphism(chain.top.dual, b, found))


def catalog_pairs(bound: int) -> list[Hom]:
    """Proper embeddings ``A -> B`` between catalog algebras with dual <= ``bound``,
    one per orbit under automorphisms of ``B``; larger ``B`` first."""
    algs = algebras_up_to(bound)
    out = []
    for b in sorted(algs, key=lambda h: -h.dual.n):
        for a in algs:
            if a.dual.n >= b.dual.n:
                continue
            seen = set()
            for e in embeddings_between(a, b):
                code = canonical_form(b.dual, _marks_for(e))
                if code not in seen:
                    seen.add(code)
                    out.append(e)
    return out


def tasks_for_level(chain: Chain, level: int, bound: int) -> list[ExtensionTask]:
    tasks = []
    seen = set()
    base_cache: dict = {}
    lv = chain.levels[level]
    for ext in catalog_pairs(bound):
        a = ext.source
        if a.dual not in base_cache:
            base_cache[a.dual] = embeddings_between(a, lv)
        for g in base_cache[a.dual]:
            t = ExtensionTask(ext, g, level)
            k = t.key()
            if k not in seen:
                seen.add(k)
                tasks.append(t)
    return tasks


def saturate(chain: Chain, pair_size_bound: int, rounds: int) -> Chain:
    """Serve every catalog task over levels ``0 .. rounds-1`` in FIFO order.

    Tasks already solved by the current top are skipped.  On SizeError the
    partially grown chain is kept (the error carries it as ``chain``).
    """
    for r in range(rounds):
        if r >= chain.depth:
            break
        chain.queue.extend(tasks_for_level(chain, r, pair_size_bound))
        while chain.queue:
            task = chain.queue[0]
            if compatible_embedding(chain, task) is not None:
                chain.skipped += 1
            else:
                try:
                    realize(chain, task)
                except SizeError as exc:
                    exc.chain = chain  # type: ignore[attr-defined]
                    raise
            chain.queue.popleft()
    return chain


def unsatisfied_tasks(chain: Chain, pair_size_bound: int, rounds: int) -> list[ExtensionTask]:
    """Soundness pass: tasks over levels ``< rounds`` with no compatible embedding."""
    bad = []
    for r in range(min(rounds, chain.depth)):
        for t in tasks_for_level(chain, r, pair_size_bound):
            if compatible_embedding(chain, t) is None:
                bad.append(t)
    return bad


def extend_by_pmorphism(chain: Chain, pi: PMorphism) -> tuple[Chain, PMorphism]:
    """Grow by the extension dual to ``pi: Q -> dual(top)`` (surjective).

    Returns the chain and the dual map from the new top onto ``Q``.
    """
    top = chain.top
    ext = Hom(top, HAlg(pi.source), pi)
    task = ExtensionTask(ext, Hom.identity(top), chain.depth - 1)
    into = realize_with_embedding(chain, task)
    return chain, into.dual


# -- back and forth ----------------------------------------------------------


def _sub(h: HAlg, gens: Iterable[int]) -> tuple[HAlg, Hom]:
    return generated_subalgebra(h, list(gens))


def _pull(inc: Hom, x: int) -> int:
    y = inc.dual.image(x)
    if inc(y) != x:
        raise NotHomomorphism("element outside the subalgebra")
    return y


def extend_partial_iso(
    chain: Chain, p: Mapping[int, int], e: int, direction: str = "forth"
) -> tuple[Chain, dict[int, int]]:
    """One back-and-forth step.

    ``p`` maps elements of the top level to elements of the top level and
    must generate an isomorphism between generated subalgebras.  With
    ``direction="forth"`` the returned map is defined on ``<dom p, e>``;
    with ``"back"`` its range contains ``e``.  Keys and values of the
    result are elements of the new top level.
    """
    h = chain.top
    if direction == "back":
        inv = {v: k for k, v in p.items()}
        chain, q = extend_partial_iso(chain, inv, e, "forth")
        return chain, {v: k for k, v in q.items()}
    full = generated_partial_map(h, list(p.items()))
    if full is None:
        raise NotHomomorphism("the partial map does not generate an isomorphism")
    dom_alg, inc_dom = _sub(h, full.keys())
    ext_alg, inc_ext = _sub(h, list(full.keys()) + [e])
    d_to_e = Hom.from_map(dom_alg, ext_alg, {x: _pull(inc_ext, inc_dom(x)) for x in dom_alg.elements})
    d_to_h = Hom.from_map(dom_alg, h, {x: full[inc_dom(x)] for x in dom_alg.elements})
    level = chain.depth - 1
    task = ExtensionTask(d_to_e, d_to_h, level)
    into = compatible_embedding(chain, task)
    if into is None:
        into = realize_with_embedding(chain, task)
    lift = chain.embedding(level)
    out = {lift(inc_ext(x)): into(x) for x in ext_alg.elements}
    return chain, out


# -- density and irreducibility ----------------------------------------------


def densify(chain: Chain, a: int, b: int) -> tuple[Chain, int]:
    """An element strictly between ``a < b`` (growing the chain if needed)."""
    h = chain.top
    h.check(a)
    h.check(b)
    if not (a & ~b == 0 and a != b):
        raise ValueError("densify needs a < b")
    diff = b & ~a
    if diff.bit_count() >= 2:
        m = h.dual.maximal(diff)[0]
        return chain, a | (1 << m)
    (p,) = bits(diff)
    q, pi = split_point(h.dual, p)
    chain, into = extend_by_pmorphism(chain, pi)
    a_top = chain.lift(a, chain.depth - 2)
    p2 = mask_of(u for u in range(chain.top.dual.n) if into.map[u] == q.n - 1)
    return chain, a_top | p2


def break_join_irreducible(chain: Chain, a: int) -> tuple[Chain, int, int]:
    """``a = b | c`` with ``b, c < a`` in the (possibly grown) top level."""
    h = chain.top
    h.check(a)
    if a == 0:
        raise ValueError("0 is the empty join")
    mins = h.dual.minimal(a)
    if len(mins) >= 2:
        return chain, a & ~(1 << mins[0]), a & ~(1 << mins[1])
    q, pi, c1, c2 = double_upset(h.dual, a)
    chain, into = extend_by_pmorphism(chain, pi)
    b = mask_of(u for u in range(chain.top.dual.n) if (c1 >> into.map[u]) & 1)
    c = mask_of(u for u in range(chain.top.dual.n) if (c2 >> into.map[u]) & 1)
    return chain, b, c


# -- checks ------------------------------------------------------------------


def check_connecting_maps(chain: Chain) -> bool:
    for i in range(chain.depth - 1):
        if not Hom(chain.levels[i], chain.levels[i + 1], chain.maps[i]).is_injective():
            return False
    # long-range composites agree with step-by-step lifting
    for i in range(chain.depth):
        e = chain.embedding(i)
        for p in range(chain.levels[i].dual.n):
            x = chain.levels[i].dual.up[p]
            if e(x) != chain.lift(x, i):
                return False
    return True


def check_envelope_tower(chain: Chain, samples: int = 64, seed: int = 0) -> bool:
    """Interiors commute with the lifted inclusions at every level."""
    rng = random.Random(seed)
    for i in range(chain.depth - 1):
        step = chain.envelope_step(i)
        n = chain.levels[i].dual.n
        subsets: Iterable[int]
        if n <= 12:
            subsets = range(1 << n)
        else:
            subsets = [rng.getrandbits(n) for _ in range(samples)]
        if not all(step.commutes(s) for s in subsets):
            return False
    return True


def embeds_into_top(chain: Chain, b: HAlg) -> bool:
    from .poset import first_pmorphism

    return first_pmorphism(chain.top.dual, b.dual, surjective=True) is not None


__all__ = [
    "Chain",
    "ExtensionTask",
    "new_chain",
    "realize",
    "saturate",
    "extend_partial_iso",
    "densify",
    "break_join_irreducible",
    "envelope",
]
