"""Boolean envelopes, regular elements and the splitting constructions.

The envelope of ``H`` is the powerset of its dual poset; the interior of a
subset is the largest up-set inside it, so the fixed points of the interior
are exactly the elements of ``H``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .amalgam import Diagram, superamalgamate
from .errors import ConstructionError, NoDual, NotForest, NotPrincipal, SizeError, ZeroElement
from .heyting import C3, TWO, HAlg, Hom, closure
from .poset import PMorphism, Poset, bits, mask_of
from .report import WitnessReport

MATERIALIZE_POINTS = 20
FOREST_PATH_BOUND = 4096


@dataclass(frozen=True)
class BoolEnv:
    """Powerset algebra of ``base.dual`` with the interior operator."""

    base: HAlg

    @property
    def n(self) -> int:
        return self.base.dual.n

    @property
    def one(self) -> int:
        return self.base.one

    def elements(self) -> range:
        if self.n > MATERIALIZE_POINTS:
            raise SizeError(f"envelope of a {self.n}-point dual is not materialized")
        return range(1 << self.n)

    def interior(self, s: int) -> int:
        return self.base.interior(s)

    def complement(self, s: int) -> int:
        return self.one & ~s

    def is_fixed(self, s: int) -> bool:
        return self.interior(s) == s


def envelope(h: HAlg) -> BoolEnv:
    return BoolEnv(h)


def interior_laws(env: BoolEnv) -> dict[str, bool]:
    """Decreasing, monotone, idempotent and meet-preserving, on all subsets."""
    subsets = list(env.elements())
    it = [env.interior(s) for s in subsets]
    ok = {"decreasing": True, "monotone": True, "idempotent": True, "meets": True}
    for s in subsets:
        i = it[s]
        ok["decreasing"] &= i & ~s == 0
        ok["idempotent"] &= env.interior(i) == i
        for t in subsets:
            if s & ~t == 0:
                ok["monotone"] &= i & ~it[t] == 0
            ok["meets"] &= it[s & t] == i & it[t]
    fixed = sorted((s for s in subsets if it[s] == s), key=lambda m: (m.bit_count(), m))
    ok["fixed_points_are_base"] = fixed == env.base.elements
    return ok


@dataclass(frozen=True)
class BoolHom:
    """``B(f)``: inverse image along the dual map, on arbitrary subsets."""

    source: BoolEnv
    target: BoolEnv
    dual: PMorphism

    def __call__(self, s: int) -> int:
        return self.dual.preimage(s)

    def is_injective(self) -> bool:
        return self.dual.is_surjective()

    def is_surjective(self) -> bool:
        return self.dual.is_injective()

    def commutes(self, s: int) -> bool:
        return self(self.source.interior(s)) == self.target.interior(self(s))


def lift_hom(f: Hom) -> BoolHom:
    dual = getattr(f, "dual", None)
    if dual is None:
        raise NoDual("homomorphism carries no dual p-morphism")
    return BoolHom(envelope(f.source), envelope(f.target), dual)


# -- regular elements --------------------------------------------------------


@dataclass(frozen=True)
class RegularAlg:
    """Fixed points of double negation with their Boolean operations.

    Meet is the host meet (regular elements are closed under it, so it
    agrees with the double negation of the meet); join is the double
    negation of the host join; the complement is negation.
    """

    host: HAlg
    carrier: tuple[int, ...]

    @property
    def zero(self) -> int:
        return self.host.zero

    @property
    def one(self) -> int:
        return self.host.one

    def meet(self, a: int, b: int) -> int:
        return self.host.neg(self.host.neg(a & b))

    def join(self, a: int, b: int) -> int:
        return self.host.neg(self.host.neg(a | b))

    def complement(self, a: int) -> int:
        return self.host.neg(a)

    def atoms(self) -> list[int]:
        nz = [a for a in self.carrier if a]
        return [a for a in nz if not any(b != a and b & ~a == 0 for b in nz)]

    def is_boolean(self) -> bool:
        cs = set(self.carrier)
        if self.zero not in cs or self.one not in cs:
            return False
        for a in self.carrier:
            c = self.complement(a)
            if c not in cs or self.meet(a, c) != self.zero or self.join(a, c) != self.one:
                return False
            for b in self.carrier:
                m, j = self.meet(a, b), self.join(a, b)
                if m not in cs or j not in cs:
                    return False
                # meet and join are the lattice bounds inside the carrier
                if m & ~a or m & ~b or a & ~j or b & ~j:
                    return False
                for c2 in self.carrier:
                    if self.meet(a, self.join(b, c2)) != self.join(self.meet(a, b), self.meet(a, c2)):
                        return False
        return True


def regular_elements(h: HAlg) -> RegularAlg:
    return RegularAlg(h, tuple(a for a in h.elements if h.is_regular(a)))


def regular_atoms_are_atoms(h: HAlg) -> bool:
    host_atoms = set(h.atoms())
    return all(a in host_atoms for a in regular_elements(h).atoms())


# -- forests and the doubling construction -----------------------------------


def forest_unravel(p: Poset, bound: int = FOREST_PATH_BOUND) -> tuple[Poset, PMorphism]:
    """Cover paths from minimal points, ordered by prefix; maps paths to ends."""
    paths: list[tuple[int, ...]] = [(m,) for m in p.minimal()]
    parent: list[int] = [-1] * len(paths)
    upper = {}
    for i, j in p.cover_pairs:
        upper.setdefault(i, []).append(j)
    k = 0
    while k < len(paths):
        for j in upper.get(paths[k][-1], ()):
            paths.append(paths[k] + (j,))
            parent.append(k)
            if len(paths) > bound:
                raise SizeError(f"unravelling exceeds {bound} paths")
        k += 1
    up = [1 << i for i in range(len(paths))]
    for i in range(len(paths) - 1, -1, -1):
        if parent[i] >= 0:
            up[parent[i]] |= up[i]
    q = Poset(len(paths), tuple(up))
    return q, PMorphism(q, p, tuple(path[-1] for path in paths))


def forestify(h: HAlg) -> tuple[HAlg, Hom]:
    """An extension of ``h`` whose dual is a forest."""
    if h.dual.is_forest():
        return h, Hom.identity(h)
    q, f = forest_unravel(h.dual)
    h2 = HAlg(q)
    return h2, Hom(h, h2, f)


def double_upset(p: Poset, a: int) -> tuple[Poset, PMorphism, int, int]:
    """Replace the up-set ``a`` by two disjoint copies of itself.

    Points outside ``a`` keep their order and lie below ``copy_i(y)`` iff
    they lie below ``y``.  Returns the new poset, the collapsing
    p-morphism and the masks of the two copies.
    """
    if not p.is_upset(a):
        raise NotPrincipal("doubling needs an up-set")
    rest = [q for q in range(p.n) if not (a >> q) & 1]
    inside = list(bits(a))
    new_of_rest = {q: k for k, q in enumerate(rest)}
    c1 = {y: len(rest) + k for k, y in enumerate(inside)}
    c2 = {y: len(rest) + len(inside) + k for k, y in enumerate(inside)}
    n2 = len(rest) + 2 * len(inside)
    up = [0] * n2
    for q in rest:
        m = 0
        for v in bits(p.up[q]):
            if (a >> v) & 1:
                m |= (1 << c1[v]) | (1 << c2[v])
            else:
                m |= 1 << new_of_rest[v]
        up[new_of_rest[q]] = m
    for copy in (c1, c2):
        for y in inside:
            up[copy[y]] = mask_of(copy[v] for v in bits(p.up[y]))
    q2 = Poset(n2, tuple(up))
    fmap = [0] * n2
    for q in rest:
        fmap[new_of_rest[q]] = q
    for copy in (c1, c2):
        for y in inside:
            fmap[copy[y]] = y
    return q2, PMorphism(q2, p, tuple(fmap)), mask_of(c1.values()), mask_of(c2.values())


@dataclass(frozen=True)
class RSplit:
    algebra: HAlg
    embedding: Hom
    r1: int
    r2: int


def r_split(h: HAlg, a: int) -> RSplit:
    """Write the principal element ``a = up x`` as a join of two regulars
    in an extension of ``h`` (a forest-dual algebra)."""
    if not h.dual.is_forest():
        raise NotForest("r_split needs a forest dual")
    h.check(a)
    mins = h.dual.minimal(a)
    if len(mins) != 1 or h.dual.up[mins[0]] != a:
        raise NotPrincipal(f"{h.label(a)} is not a principal up-set")
    x = mins[0]
    if not h.dual.lower_covers(x):
        return RSplit(h, Hom.identity(h), a, a)
    q, f, r1, r2 = double_upset(h.dual, a)
    h2 = HAlg(q)
    return RSplit(h2, Hom(h, h2, f), r1, r2)


def r_split_checks(h: HAlg, a: int, rs: RSplit) -> dict[str, bool]:
    hr = rs.algebra
    joined = rs.r1 | rs.r2
    meet_nn = hr.neg(hr.neg(rs.r1 & rs.r2))
    root = rs.r1 == rs.r2
    return {
        "r1_regular": hr.is_regular(rs.r1),
        "r2_regular": hr.is_regular(rs.r2),
        "join_is_image": joined == rs.embedding(a),
        "distinct": root or (meet_nn & ~rs.r1 == 0 and meet_nn != rs.r1 and meet_nn != rs.r2),
        "embedding": rs.embedding.is_injective(),
    }


# -- atomless splitting ------------------------------------------------------


def atomless_split(chain, b: int):
    """Grow ``chain`` so that a strictly smaller nonzero ``b'`` appears.

    ``b`` is a subset of the top level's dual points (an envelope element).
    Returns the grown chain and ``b'`` as a subset of the new top dual.
    """
    from .limit import extend_by_pmorphism
    from .poset import split_point

    if b == 0:
        raise ZeroElement("the zero of the envelope cannot be split")
    top = chain.top
    w = min(bits(b), key=lambda v: (top.dual.heights[v], v))
    q, pi = split_point(top.dual, w)
    chain, into = extend_by_pmorphism(chain, pi)
    # into: new top dual -> q
    lifted = chain.lift_subset(b, chain.depth - 2)
    w2 = mask_of(u for u in range(chain.top.dual.n) if into.map[u] == q.n - 1)
    return chain, lifted & ~w2


# -- the six-atom witness ----------------------------------------------------


def _boolean_atoms(h: HAlg, gens: list[int]) -> list[int]:
    """Atoms of the Boolean subalgebra of regulars generated by ``gens``."""
    vals = set()
    for signs in itertools.product((0, 1), repeat=len(gens)):
        m = h.one
        for g, s in zip(gens, signs):
            m &= g if s else h.neg(g)
        if m:
            vals.add(m)
    return sorted(vals)


def _permutation_extends(h: HAlg, gens: list[int], perm: list[int]) -> bool:
    """Whether ``gens[k] -> gens[perm[k]]`` extends to a Boolean automorphism."""
    for signs in itertools.product((0, 1), repeat=len(gens)):
        m1 = m2 = h.one
        for k, s in enumerate(signs):
            m1 &= gens[k] if s else h.neg(gens[k])
            g = gens[perm[k]]
            m2 &= g if s else h.neg(g)
        if (m1 == 0) != (m2 == 0):
            return False
    return True


def six_atom_witness(cyclic: bool = True) -> WitnessReport:
    """Amalgamation picture of the h-negneg argument.

    ``cyclic=False`` uses the identity permutation instead of
    ``a_ji -> a_(j+1 mod 3)i``.
    """
    rep = WitnessReport("hneg")
    e = Hom(TWO, C3, PMorphism(C3.dual, TWO.dual, (0, 0)))
    a = C3.dual.up[1]
    rep.stage("C3", C3)
    d = superamalgamate(Diagram.of(e, e))
    rep.stage("grid", d.result)
    rs = r_split(C3, a)
    chk = r_split_checks(C3, a, rs)
    if not all(chk.values()):
        raise ConstructionError("r_split", str(chk))
    hh = rep.stage("H", rs.algebra)
    inner = superamalgamate(Diagram.of(rs.embedding, rs.embedding))
    if not inner.verdicts.get("independent"):
        raise ConstructionError("D'", "amalgam of H over C3 is not independent")
    nn = rep.stage("N", inner.result)
    e_left = Hom(TWO, hh, PMorphism(hh.dual, TWO.dual, (0,) * hh.dual.n))
    e_right = Hom(TWO, nn, PMorphism(nn.dual, TWO.dual, (0,) * nn.dual.n))
    outer = superamalgamate(Diagram.of(e_left, e_right))
    amb = rep.stage("ambient", outer.result)
    lft, rgt = outer.into_left, outer.into_right
    gens = {
        (0, 1): lft(rs.r1),
        (0, 2): lft(rs.r2),
        (1, 1): rgt(inner.into_left(rs.r1)),
        (1, 2): rgt(inner.into_left(rs.r2)),
        (2, 1): rgt(inner.into_right(rs.r1)),
        (2, 2): rgt(inner.into_right(rs.r2)),
    }
    a0 = lft(rs.embedding(a))
    a15 = rgt(inner.into_left(rs.embedding(a)))
    # the two copies of C3 generate a copy of the grid amalgam
    c3_left = [lft(rs.embedding(x)) for x in C3.elements]
    c3_right = [rgt(inner.into_left(rs.embedding(x))) for x in C3.elements]
    grid_copy = len(closure(amb, c3_left + c3_right)) == d.result.size()
    if not grid_copy:
        raise ConstructionError("ambient", "copies of C3 do not generate the grid amalgam")
    sanity = (gens[1, 1] | gens[1, 2]) == a15 and (gens[0, 1] | gens[0, 2]) == a0
    if not sanity:
        raise ConstructionError("sanity", "join of r-parts differs from the split element")
    keys = sorted(gens)
    order = [gens[k] for k in keys]
    regular = all(amb.is_regular(g) for g in order)
    atoms = _boolean_atoms(amb, order)
    shift = 1 if cyclic else 0
    perm = [keys.index(((j + shift) % 3, i)) for (j, i) in keys]
    phi = {k: gens[((k[0] + shift) % 3, k[1])] for k in keys}
    join1 = phi[1, 1] | phi[1, 2]
    join2 = phi[2, 1] | phi[2, 2]
    rep.verdicts.update(
        {
            "generators_regular": regular,
            "six_atoms": len(atoms) == 6,
            "permutation_extends": _permutation_extends(amb, order, perm),
            "joins_differ": join1 != join2,
        }
    )
    rep.data.update(
        {
            "atom_count": len(atoms),
            "generators": {f"a{j}{i}": list(bits(g)) for (j, i), g in gens.items()},
            "a0": list(bits(a0)),
            "a1.5": list(bits(a15)),
            "join_a11_a12": list(bits(gens[1, 1] | gens[1, 2])),
            "phi_join_1": list(bits(join1)),
            "phi_join_2": list(bits(join2)),
            "pairwise_meets_zero": all(gens[k] & gens[m] == 0 for k in keys for m in keys if k < m),
            "permutation": "cyclic" if cyclic else "identity",
        }
    )
    return rep
