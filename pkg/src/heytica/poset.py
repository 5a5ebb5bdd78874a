"""Finite posets, up-sets as bit masks, p-morphisms and poset surgery.

Elements of an ``n``-point poset are the integers ``0..n-1``.  The order is
stored as one bit mask per element: ``up[i]`` has bit ``j`` set iff
``i <= j``.  Subsets of the carrier (in particular up-sets) are plain Python
ints used as bit vectors, which keeps closure operations cheap even for a
few hundred points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import BadElement, CycleError, NotPMorphism, NotSurjective, SizeError, TargetMismatch

DEFAULT_UPSET_BOUND = 2**20


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@dataclass(frozen=True)
class Poset:
    """A finite partial order on ``range(n)``.

    ``up[i]`` is the principal up-set of ``i`` (it contains ``i``).  The
    constructor rejects relations that are not reflexive, antisymmetric and
    transitive.
    """

    n: int
    up: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.up) != self.n:
            raise ValueError("up must have one mask per element")
        full = (1 << self.n) - 1
        for i, m in enumerate(self.up):
            if not (m >> i) & 1:
                raise ValueError(f"relation is not reflexive at {i}")
            if m & ~full:
                raise ValueError(f"up[{i}] references elements outside range({self.n})")
            for j in bits(m & ~(1 << i)):
                if (self.up[j] >> i) & 1:
                    raise CycleError(f"{i} <= {j} <= {i}")
                if self.up[j] & ~m:
                    raise ValueError(f"relation is not transitive at {i} <= {j}")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_relation(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Poset":
        """Reflexive-transitive closure of ``pairs`` (each ``(i, j)`` means i <= j)."""
        up = [1 << i for i in range(n)]
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise BadElement(f"pair ({i}, {j}) out of range for n={n}")
            up[i] |= 1 << j
        for k in range(n):
            bk = 1 << k
            uk = up[k]
            for i in range(n):
                if up[i] & bk:
                    up[i] |= uk
        for i in range(n):
            for j in bits(up[i] & ~(1 << i)):
                if (up[j] >> i) & 1:
                    raise CycleError(f"closure identifies {i} and {j}")
        return cls(n, tuple(up))

    @classmethod
    def from_leq(cls, leq: Sequence[Sequence[bool]]) -> "Poset":
        n = len(leq)
        return cls(n, tuple(mask_of(j for j in range(n) if leq[i][j]) for i in range(n)))

    @classmethod
    def chain(cls, k: int) -> "Poset":
        return mk_poset(k, [(i, i + 1) for i in range(k - 1)])

    @classmethod
    def antichain(cls, k: int) -> "Poset":
        return cls(k, tuple(1 << i for i in range(k)))

    # -- basic queries ------------------------------------------------------

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.n
        for i, m in enumerate(self.up):
            for j in bits(m):
                down[j] |= 1 << i
        return tuple(down)

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def lt(self, i: int, j: int) -> bool:
        return i != j and self.leq(i, j)

    def leq_matrix(self) -> list[list[bool]]:
        return [[self.leq(i, j) for j in range(self.n)] for i in range(self.n)]

    def up_closure(self, s: int) -> int:
        out = 0
        for i in bits(s):
            out |= self.up[i]
        return out

    def down_closure(self, s: int) -> int:
        out = 0
        for i in bits(s):
            out |= self.down[i]
        return out

    def is_upset(self, s: int) -> bool:
        return self.up_closure(s) == s

    def is_downset(self, s: int) -> bool:
        return self.down_closure(s) == s

    def minimal(self, s: int | None = None) -> list[int]:
        """Minimal elements of the subset ``s`` (default: whole poset)."""
        s = self.full if s is None else s
        return [i for i in bits(s) if not (self.down[i] & s & ~(1 << i))]

    def maximal(self, s: int | None = None) -> list[int]:
        s = self.full if s is None else s
        return [i for i in bits(s) if not (self.up[i] & s & ~(1 << i))]

    @cached_property
    def cover_pairs(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(i, j)`` with ``j`` covering ``i``, in index order."""
        out = []
        for i in range(self.n):
            strict = self.up[i] & ~(1 << i)
            for j in bits(strict):
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        return tuple(out)

    def lower_covers(self, j: int) -> list[int]:
        return [i for (i, k) in self.cover_pairs if k == j]

    @cached_property
    def heights(self) -> tuple[int, ...]:
        """Length of the longest chain ending at each element."""
        h = [0] * self.n
        for i in sorted(range(self.n), key=lambda k: (self.down[k]).bit_count()):
            below = self.down[i] & ~(1 << i)
            h[i] = max((h[j] + 1 for j in bits(below)), default=0)
        return tuple(h)

    def is_forest(self) -> bool:
        """Every principal down-set is a chain (roots are the minimal points)."""
        return all(len(self.lower_covers(j)) <= 1 for j in range(self.n))

    def components(self) -> list[int]:
        """Connected components as masks, ordered by least element."""
        seen = 0
        comps = []
        for i in range(self.n):
            if (seen >> i) & 1:
                continue
            comp = 1 << i
            frontier = comp
            while frontier:
                grow = 0
                for j in bits(frontier):
                    grow |= self.up[j] | self.down[j]
                frontier = grow & ~comp
                comp |= grow
            seen |= comp
            comps.append(comp)
        return comps

    def induced(self, s: int) -> tuple["Poset", list[int]]:
        """Sub-poset on ``s``; returns it with the list of original indices."""
        idx = list(bits(s))
        pos = {v: k for k, v in enumerate(idx)}
        up = tuple(mask_of(pos[j] for j in bits(self.up[i] & s)) for i in idx)
        return Poset(len(idx), up), idx

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Image under the bijection ``i -> perm[i]``."""
        up = [0] * self.n
        for i in range(self.n):
            up[perm[i]] = mask_of(perm[j] for j in bits(self.up[i]))
        return Poset(self.n, tuple(up))

    def dual_order(self) -> "Poset":
        return Poset(self.n, self.down)


def mk_poset(n: int, covers: Iterable[tuple[int, int]]) -> Poset:
    """Poset on ``range(n)`` generated by the given (cover) pairs."""
    return Poset.from_relation(n, [tuple(c) for c in covers])


def disjoint_union(p: Poset, q: Poset) -> Poset:
    shift = p.n
    return Poset(p.n + q.n, p.up + tuple(m << shift for m in q.up))


def enumerate_upsets(p: Poset, bound: int = DEFAULT_UPSET_BOUND) -> list[int]:
    """All up-sets of ``p`` ordered by cardinality, then by mask value."""
    order = sorted(range(p.n), key=lambda i: (-p.heights[i], i))
    out: list[int] = []
    # Elements are decided top-down, so every strict upper bound of the current
    # element has already been decided when we reach it.
    stack = [(0, 0)]
    while stack:
        k, cur = stack.pop()
        if k == len(order):
            out.append(cur)
            if len(out) > bound:
                raise SizeError(f"more than {bound} up-sets")
            continue
        i = order[k]
        stack.append((k + 1, cur))
        strict = p.up[i] & ~(1 << i)
        if strict & cur == strict:
            stack.append((k + 1, cur | (1 << i)))
    out.sort(key=lambda m: (m.bit_count(), m))
    return out


def count_upsets(p: Poset, bound: int | None = None) -> int:
    """Number of up-sets; stops early once ``bound`` is exceeded."""
    order = sorted(range(p.n), key=lambda i: (-p.heights[i], i))
    count = 0
    stack = [(0, 0)]
    while stack:
        k, cur = stack.pop()
        if k == len(order):
            count += 1
            if bound is not None and count > bound:
                return count
            continue
        i = order[k]
        stack.append((k + 1, cur))
        strict = p.up[i] & ~(1 << i)
        if strict & cur == strict:
            stack.append((k + 1, cur | (1 << i)))
    return count


# -- p-morphisms -----------------------------------------------------------


def is_pmorphism(f: Sequence[int], p: Poset, q: Poset) -> bool:
    """Monotone with the back condition, tested as ``f(up u) == up f(u)``."""
    if len(f) != p.n or any(not (0 <= v < q.n) for v in f):
        return False
    for u in range(p.n):
        image = 0
        for w in bits(p.up[u]):
            image |= 1 << f[w]
        if image != q.up[f[u]]:
            return False
    return True


@dataclass(frozen=True)
class PMorphism:
    source: Poset
    target: Poset
    map: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_pmorphism(self.map, self.source, self.target):
            raise NotPMorphism(f"{self.map} is not a p-morphism")

    def __call__(self, u: int) -> int:
        return self.map[u]

    def is_surjective(self) -> bool:
        return len(set(self.map)) == self.target.n

    def is_injective(self) -> bool:
        return len(set(self.map)) == self.source.n

    def preimage(self, s: int) -> int:
        return mask_of(u for u, v in enumerate(self.map) if (s >> v) & 1)

    def image(self, s: int) -> int:
        return mask_of(self.map[u] for u in bits(s))

    def then(self, other: "PMorphism") -> "PMorphism":
        """``other`` after ``self``."""
        if other.source != self.target:
            raise TargetMismatch("composition of p-morphisms with mismatched ends")
        return PMorphism(self.source, other.target, tuple(other.map[v] for v in self.map))

    @classmethod
    def identity(cls, p: Poset) -> "PMorphism":
        return cls(p, p, tuple(range(p.n)))


def pmorphisms(
    p: Poset,
    q: Poset,
    *,
    surjective: bool = False,
    injective: bool = False,
    allowed: Sequence[int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Enumerate p-morphisms ``p -> q`` as image tuples.

    ``allowed[u]`` optionally restricts the image of ``u`` to a mask of
    ``q``.  Points are assigned from the top down; the assignment of ``u`` is
    then forced to satisfy ``up f(u) == {f(u)} | f(strict up u)``, which is
    the whole p-morphism condition at ``u``.
    """
    order = sorted(range(p.n), key=lambda i: (-p.heights[i], i))
    allow = list(allowed) if allowed is not None else [q.full] * p.n
    f = [-1] * p.n
    n = p.n

    def rec(k: int, used: int) -> Iterator[tuple[int, ...]]:
        if k == n:
            if not surjective or used == q.full:
                yield tuple(f)
            return
        if surjective and (q.full & ~used).bit_count() > n - k:
            return
        u = order[k]
        s = 0
        for w in bits(p.up[u] & ~(1 << u)):
            s |= 1 << f[w]
        for c in bits(allow[u]):
            if injective and (used >> c) & 1:
                continue
            if q.up[c] == s | (1 << c):
                f[u] = c
                yield from rec(k + 1, used | (1 << c))
        f[u] = -1

    yield from rec(0, 0)


def first_pmorphism(p: Poset, q: Poset, **kw) -> tuple[int, ...] | None:
    return next(pmorphisms(p, q, **kw), None)


def poset_automorphisms(p: Poset) -> list[tuple[int, ...]]:
    """All order automorphisms, the identity first."""
    allowed = []
    for u in range(p.n):
        key = (p.up[u].bit_count(), p.down[u].bit_count())
        allowed.append(mask_of(v for v in range(p.n) if (p.up[v].bit_count(), p.down[v].bit_count()) == key))
    autos = list(pmorphisms(p, p, injective=True, allowed=allowed))
    autos.sort(key=lambda a: a != tuple(range(p.n)))
    return autos


# -- surgery ---------------------------------------------------------------


def split_point(p: Poset, w: int) -> tuple[Poset, PMorphism]:
    """Replace ``w`` by a 2-chain ``w1 < w2``.

    ``w1`` keeps index ``w`` and ``w2`` is the new index ``p.n``.  ``w1``
    inherits the strict lower bounds of ``w``, ``w2`` the strict upper bounds.
    The returned p-morphism collapses both copies back onto ``w``.
    """
    if not 0 <= w < p.n:
        raise BadElement(f"{w} is not an element of a {p.n}-point poset")
    w2 = p.n
    up = []
    for i in range(p.n):
        m = p.up[i]
        if (m >> w) & 1:
            m |= 1 << w2
        up.append(m)
    up.append((p.up[w] & ~(1 << w)) | (1 << w2))
    q = Poset(p.n + 1, tuple(up))
    return q, PMorphism(q, p, tuple(range(p.n)) + (w,))


def adjoin_point(p: Poset) -> tuple[Poset, int]:
    """``p`` plus one fresh point incomparable to everything; returns its index."""
    return Poset(p.n + 1, p.up + (1 << p.n,)), p.n


def add_top(p: Poset) -> tuple[Poset, int]:
    t = p.n
    return Poset(p.n + 1, tuple(m | (1 << t) for m in p.up) + (1 << t,)), t


def fibered_product(pi1: PMorphism, pi2: PMorphism) -> tuple[Poset, PMorphism, PMorphism]:
    """Pullback of two surjective p-morphisms onto a common target.

    Points are the pairs ``(p1, p2)`` with ``pi1(p1) == pi2(p2)`` in
    lexicographic order, ordered componentwise.
    """
    if pi1.target != pi2.target:
        raise TargetMismatch("p-morphisms have different targets")
    for pi in (pi1, pi2):
        if not pi.is_surjective():
            raise NotSurjective("fibered product needs surjective legs")
    p1, p2 = pi1.source, pi2.source
    pairs = [(a, b) for a in range(p1.n) for b in range(p2.n) if pi1.map[a] == pi2.map[b]]
    index = {pr: k for k, pr in enumerate(pairs)}
    # per-coordinate masks over the pair indices
    first = [0] * p1.n
    second = [0] * p2.n
    for k, (a, b) in enumerate(pairs):
        first[a] |= 1 << k
        second[b] |= 1 << k
    up_first = [0] * p1.n
    for a in range(p1.n):
        for c in bits(p1.up[a]):
            up_first[a] |= first[c]
    up_second = [0] * p2.n
    for b in range(p2.n):
        for c in bits(p2.up[b]):
            up_second[b] |= second[c]
    up = tuple(up_first[a] & up_second[b] for (a, b) in pairs)
    q = Poset(len(pairs), up)
    del index
    return (
        q,
        PMorphism(q, p1, tuple(a for a, _ in pairs)),
        PMorphism(q, p2, tuple(b for _, b in pairs)),
    )


# -- linear extensions -----------------------------------------------------


def _extensions(n: int, preds: list[int]) -> Iterator[tuple[int, ...]]:
    order: list[int] = []

    def rec(placed: int) -> Iterator[tuple[int, ...]]:
        if len(order) == n:
            yield tuple(order)
            return
        for i in range(n):
            if not (placed >> i) & 1 and preds[i] & placed == preds[i]:
                order.append(i)
                yield from rec(placed | (1 << i))
                order.pop()

    yield from rec(0)


def _check_acyclic(n: int, preds: list[int]) -> None:
    placed = 0
    progress = True
    while progress:
        progress = False
        for i in range(n):
            if not (placed >> i) & 1 and preds[i] & placed == preds[i]:
                placed |= 1 << i
                progress = True
    if placed != (1 << n) - 1:
        raise CycleError("relation contains a cycle")


def linear_extensions(p: Poset | int, pairs: Iterable[tuple[int, int]] | None = None) -> Iterator[tuple[int, ...]]:
    """Every total order extending ``p``, as element lists from least to greatest.

    Accepts a :class:`Poset`, or an element count plus an arbitrary relation
    (``(i, j)`` meaning ``i`` before ``j``), which is checked for cycles first.
    Orders are produced in lexicographic order of the element sequences.
    """
    if isinstance(p, Poset):
        n = p.n
        preds = [p.down[i] & ~(1 << i) for i in range(n)]
    else:
        n = p
        preds = [0] * n
        for i, j in pairs or ():
            if i == j:
                raise CycleError(f"reflexive pair ({i}, {i}) in a strict relation")
            preds[j] |= 1 << i
    _check_acyclic(n, preds)
    return _extensions(n, preds)


def first_linear_extension(n: int, pairs: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    return next(linear_extensions(n, pairs))


# -- canonical form --------------------------------------------------------


def _refine(p: Poset, colors: list[int]) -> list[int]:
    strict_up = [p.up[i] & ~(1 << i) for i in range(p.n)]
    strict_down = [p.down[i] & ~(1 << i) for i in range(p.n)]
    ncolors = len(set(colors))
    while True:
        sigs = [
            (
                colors[v],
                tuple(sorted(colors[u] for u in bits(strict_up[v]))),
                tuple(sorted(colors[u] for u in bits(strict_down[v]))),
            )
            for v in range(p.n)
        ]
        rank = {s: k for k, s in enumerate(sorted(set(sigs)))}
        colors = [rank[s] for s in sigs]
        if len(rank) == ncolors:
            return colors
        ncolors = len(rank)


def canonical_form(p: Poset, marks: Sequence[int] = ()) -> bytes:
    """Isomorphism-invariant code of ``p`` together with distinguished subsets.

    ``marks`` is a sequence of masks (e.g. up-sets naming algebra elements);
    two marked posets get the same code iff some order isomorphism carries
    each mark onto the corresponding mark.  Colour refinement plus
    individualisation; incomparable twins are branched on once.
    """
    n = p.n
    markvec = [sum(((m >> v) & 1) << k for k, m in enumerate(marks)) for v in range(n)]
    strict_up = [p.up[i] & ~(1 << i) for i in range(n)]
    strict_down = [p.down[i] & ~(1 << i) for i in range(n)]
    init = sorted(set(markvec))
    colors = [init.index(markvec[v]) for v in range(n)]
    best: list[tuple[int, ...] | None] = [None]

    def leaf(colors: list[int]) -> tuple[int, ...]:
        pos = colors  # discrete: colour == position
        code = [n, len(marks)]
        order = sorted(range(n), key=lambda v: pos[v])
        code.extend(markvec[v] for v in order)
        for v in order:
            code.append(mask_of(pos[u] for u in bits(p.up[v])))
        return tuple(code)

    def search(colors: list[int]) -> None:
        colors = _refine(p, colors)
        if len(set(colors)) == n:
            c = leaf(colors)
            if best[0] is None or c < best[0]:
                best[0] = c
            return
        counts: dict[int, int] = {}
        for c in colors:
            counts[c] = counts.get(c, 0) + 1
        target = min(c for c, k in counts.items() if k > 1)
        tried: set[tuple[int, int]] = set()
        for v in range(n):
            if colors[v] != target:
                continue
            twin = (strict_up[v], strict_down[v])
            if twin in tried:
                continue
            tried.add(twin)
            search([2 * c + (0 if u == v else 1) for u, c in enumerate(colors)])

    if n:
        search(colors)
        code = best[0]
    else:
        code = (0, len(marks))
    return ",".join(map(str, code)).encode()


def canonical_poset(p: Poset) -> Poset:
    """The relabelling of ``p`` whose up-masks appear in its canonical code."""
    code = [int(x) for x in canonical_form(p).split(b",")]
    n = code[0]
    return Poset(n, tuple(code[2 + n:]))


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return p.n == q.n and canonical_form(p) == canonical_form(q)


def find_isomorphism(p: Poset, q: Poset) -> tuple[int, ...] | None:
    """An order isomorphism ``p -> q`` or ``None``."""
    if p.n != q.n:
        return None
    return first_pmorphism(p, q, injective=True)


# -- interchange -----------------------------------------------------------


def poset_to_json(p: Poset) -> dict:
    return {"n": p.n, "covers": [list(c) for c in p.cover_pairs]}


def poset_from_json(obj: dict) -> Poset:
    return mk_poset(int(obj["n"]), [tuple(c) for c in obj.get("covers", [])])


def poset_to_dot(p: Poset, name: str = "P", labels: Sequence[str] | None = None) -> str:
    """Hasse diagram in DOT; edges are covers, ranks follow heights."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for i in range(p.n):
        label = labels[i] if labels else str(i)
        lines.append(f'  n{i} [label="{label}"];')
    by_height: dict[int, list[int]] = {}
    for i, h in enumerate(p.heights):
        by_height.setdefault(h, []).append(i)
    for h in sorted(by_height):
        lines.append("  { rank=same; " + " ".join(f"n{i};" for i in by_height[h]) + " }")
    for i, j in p.cover_pairs:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
