from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heytica.catalog import enumerate_posets, posets_up_to
from heytica.errors import CycleError
from heytica.poset import (
    PMorphism,
    Poset,
    add_top,
    adjoin_point,
    canonical_form,
    count_upsets,
    enumerate_upsets,
    fibered_product,
    find_isomorphism,
    is_pmorphism,
    linear_extensions,
    mk_poset,
    pmorphisms,
    poset_from_json,
    poset_to_dot,
    poset_to_json,
    split_point,
)

from oracles import upsets_brute


@st.composite
def posets(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Poset.from_relation(n, chosen)


def test_chain_and_antichain_shapes():
    c = Poset.chain(3)
    assert c.leq(0, 2) and not c.leq(2, 0)
    a = Poset.antichain(3)
    assert a.minimal() == [0, 1, 2] == a.maximal()


def test_cycle_rejected():
    with pytest.raises(CycleError):
        Poset.from_relation(2, [(0, 1), (1, 0)])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_upsets_match_brute_force(n):
    for p in enumerate_posets(n):
        assert sorted(enumerate_upsets(p)) == upsets_brute(n, p.leq)
        assert count_upsets(p) == len(upsets_brute(n, p.leq))


@given(posets())
def test_linear_extensions_match_permutation_scan(p):
    exts = set(linear_extensions(p))
    brute = {
        perm
        for perm in itertools.permutations(range(p.n))
        if all(perm.index(i) <= perm.index(j) for i in range(p.n) for j in range(p.n) if p.leq(i, j))
    }
    assert exts == brute


@given(posets(), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(p, rnd):
    perm = list(range(p.n))
    rnd.shuffle(perm)
    q = p.relabel(perm)
    assert canonical_form(p) == canonical_form(q)
    iso = find_isomorphism(p, q)
    assert iso is not None
    assert all(p.leq(i, j) == q.leq(iso[i], iso[j]) for i in range(p.n) for j in range(p.n))


def test_canonical_codes_separate_catalog_entries():
    for n in range(1, 6):
        codes = [canonical_form(p) for p in enumerate_posets(n)]
        assert len(set(codes)) == len(codes)


def test_canonical_codes_stable_under_many_relabellings():
    rng = random.Random(0)
    for p in posets_up_to(4):
        code = canonical_form(p)
        for _ in range(100):
            perm = list(range(p.n))
            rng.shuffle(perm)
            assert canonical_form(p.relabel(perm)) == code


def test_marks_distinguish_orbits():
    p = Poset.chain(2)
    assert canonical_form(p, [0b01]) != canonical_form(p, [0b10])
    a = Poset.antichain(2)
    assert canonical_form(a, [0b01]) == canonical_form(a, [0b10])


def _pmorphisms_brute(p, q):
    return {f for f in itertools.product(range(q.n), repeat=p.n) if is_pmorphism(f, p, q)}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pmorphism_search_matches_brute_force(n):
    ps = posets_up_to(n)
    for p in ps:
        for q in ps:
            assert set(pmorphisms(p, q)) == _pmorphisms_brute(p, q)


def test_pmorphism_back_condition():
    # 2-chain onto a point is fine; a point into the bottom of a 2-chain is not
    c2, pt = Poset.chain(2), Poset.chain(1)
    assert is_pmorphism((0, 0), c2, pt)
    assert not is_pmorphism((0,), pt, c2)
    assert is_pmorphism((1,), pt, c2)


def test_split_point_collapses_onto_original():
    p = Poset.chain(2)
    q, pi = split_point(p, 0)
    assert q.n == 3 and pi.is_surjective()
    assert q.leq(0, 2) and q.leq(2, 1)


def test_adjoin_and_add_top():
    p, t = adjoin_point(Poset.chain(2))
    assert p.minimal() == [0, t] and p.maximal() == [1, t]
    q, top = add_top(Poset.antichain(2))
    assert q.maximal() == [top]


def test_fibered_product_projections_are_surjective_pmorphisms():
    c2 = Poset.chain(2)
    pt = Poset.chain(1)
    f = PMorphism(c2, pt, (0, 0))
    q, pr1, pr2 = fibered_product(f, f)
    assert q.n == 4
    assert pr1.is_surjective() and pr2.is_surjective()
    assert is_pmorphism(pr1.map, q, c2) and is_pmorphism(pr2.map, q, c2)


@given(posets())
@settings(max_examples=50)
def test_json_round_trip(p):
    q = poset_from_json(poset_to_json(p))
    assert q.up == p.up


def test_dot_lists_covers():
    text = poset_to_dot(mk_poset(3, [(0, 1), (1, 2)]))
    assert "n0 -> n1;" in text and "n1 -> n2;" in text and "n0 -> n2" not in text
