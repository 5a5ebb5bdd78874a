from __future__ import annotations

import pytest

from heytica.catalog import algebras_up_to, embeddings_between, posets_up_to
from heytica.envelope import (
    atomless_split,
    double_upset,
    envelope,
    forestify,
    interior_laws,
    lift_hom,
    r_split,
    r_split_checks,
    regular_atoms_are_atoms,
    regular_elements,
    six_atom_witness,
)
from heytica.errors import NoDual, NotForest, NotPrincipal, SizeError, ZeroElement
from heytica.heyting import B4, C3, TWO, HAlg
from heytica.limit import Chain
from heytica.poset import Poset, is_pmorphism


@pytest.mark.parametrize("h", algebras_up_to(4), ids=lambda h: f"{h.dual.n}:{h.dual.up}")
def test_interior_laws(h):
    laws = interior_laws(envelope(h))
    assert all(laws.values()), laws
    env = envelope(h)
    fixed = sorted(s for s in env.elements() if env.is_fixed(s))
    assert fixed == sorted(h.elements)


def test_envelope_not_materialized_when_large():
    big = HAlg(Poset.antichain(21))
    with pytest.raises(SizeError):
        envelope(big).elements()
    assert envelope(big).interior(0b101) == 0b101


def test_lift_commutes_with_interior():
    algs = algebras_up_to(3)
    for h1 in algs:
        for h2 in algs:
            for f in embeddings_between(h1, h2):
                bf = lift_hom(f)
                assert all(bf.commutes(s) for s in range(1 << h1.dual.n))
                assert bf.is_injective()


def test_lift_needs_dual():
    class Bare:
        dual = None

    with pytest.raises(NoDual):
        lift_hom(Bare())  # type: ignore[arg-type]


@pytest.mark.parametrize("h", algebras_up_to(4), ids=lambda h: f"{h.dual.n}:{h.dual.up}")
def test_regular_elements_boolean(h):
    reg = regular_elements(h)
    assert reg.is_boolean()
    for a in reg.carrier:
        assert h.neg(h.neg(a)) == a


def test_regular_atoms_claim_fails_on_c3():
    # regulars of C3 are {0, 1}; 1 is their atom but not an atom of C3
    reg = regular_elements(C3)
    assert sorted(reg.carrier) == [C3.zero, C3.one]
    assert regular_atoms_are_atoms(C3) is False
    assert regular_atoms_are_atoms(B4) is True


def test_r_split_three_chain():
    a = C3.dual.up[1]
    rs = r_split(C3, a)
    assert rs.algebra.dual.n == 3  # bottom point plus two copies of the top
    assert all(r_split_checks(C3, a, rs).values())


def test_r_split_three_point_chain_dual_middle():
    h = HAlg(Poset.chain(3))
    a = h.dual.up[1]
    rs = r_split(h, a)
    assert rs.algebra.dual.n == 5  # bottom plus two copies of a 2-point up-set
    checks = r_split_checks(h, a, rs)
    assert all(checks.values()), checks


def test_r_split_root_is_identity():
    a = C3.dual.up[0]
    rs = r_split(C3, a)
    assert rs.r1 == rs.r2 == a and rs.algebra is C3


def test_r_split_errors():
    v = Poset.from_relation(3, [(0, 2), (1, 2)])  # point 2 has two lower covers
    with pytest.raises(NotForest):
        r_split(HAlg(v), v.up[2])
    with pytest.raises(NotPrincipal):
        r_split(B4, B4.one)


def test_r_split_all_forest_inputs():
    count = 0
    for p in posets_up_to(5):
        if not p.is_forest():
            continue
        h = HAlg(p)
        for x in range(p.n):
            if p.lower_covers(x):
                rs = r_split(h, p.up[x])
                assert all(r_split_checks(h, p.up[x], rs).values())
                count += 1
    assert count > 0


def test_forestify_produces_forest_extension():
    v = Poset.from_relation(3, [(0, 2), (1, 2)])
    h = HAlg(v)
    h2, e = forestify(h)
    assert h2.dual.is_forest()
    assert e.is_injective()
    assert is_pmorphism(e.dual.map, h2.dual, h.dual)


def test_double_upset_gives_regular_copies():
    p = Poset.chain(3)
    q, f, c1, c2 = double_upset(p, p.up[1])
    assert is_pmorphism(f.map, q, p) and f.is_surjective()
    h = HAlg(q)
    assert h.is_regular(c1) and h.is_regular(c2)


def test_atomless_split_every_element_small():
    for h in algebras_up_to(3):
        for s in range(1, 1 << h.dual.n):
            ch, s2 = atomless_split(Chain([h]), s)
            lifted = ch.lift(s, 0)
            assert s2 and s2 & ~lifted == 0 and s2 != lifted


def test_atomless_split_zero():
    with pytest.raises(ZeroElement):
        atomless_split(Chain([C3]), 0)


def test_atomless_split_nests():
    ch = Chain([TWO])
    ch, b1 = atomless_split(ch, 1)
    ch, b2 = atomless_split(ch, b1)
    lifted = ch.lift(b1, ch.depth - 2)
    assert b2 and b2 & ~lifted == 0 and b2 != lifted


@pytest.fixture(scope="module")
def hneg():
    return six_atom_witness()


def test_six_atom_witness_joins_differ(hneg):
    assert hneg.verdicts["joins_differ"]
    assert hneg.verdicts["generators_regular"]
    assert hneg.verdicts["permutation_extends"]
    assert set(hneg.stages) == {"C3", "grid", "H", "N", "ambient"}


def test_six_atom_witness_atom_count(hneg):
    # the six generators meet pairwise nontrivially, giving 8 atoms
    assert hneg.data["atom_count"] == 8
    assert hneg.verdicts["six_atoms"] is False


def test_identity_permutation_gives_equal_joins():
    rep = six_atom_witness(cyclic=False)
    assert rep.verdicts["joins_differ"] is False
