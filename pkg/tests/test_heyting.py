from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heytica.catalog import algebras_up_to, posets_up_to
from heytica.errors import AxiomError, BadElement
from heytica.heyting import (
    B4,
    C3,
    TWO,
    HAlg,
    Hom,
    RawTables,
    add_bottom,
    algebra_from_json,
    algebra_to_json,
    automorphisms,
    closure,
    dual_of_pmorphism,
    dual_poset,
    generated_partial_map,
    generated_subalgebra,
    join_primes,
    tables_of,
    validate_heyting_tables,
)
from heytica.poset import PMorphism, Poset, is_isomorphic, pmorphisms
from heytica.terms import ONE, X, Y, ZERO, Term, eval_term, parse_term, star_term, terms_up_to

from oracles import join_prime_brute


def test_small_algebras():
    assert TWO.size() == 2 and C3.size() == 3 and B4.size() == 4
    a = C3.dual.up[1]
    assert C3.neg(a) == C3.zero
    assert C3.neg(C3.neg(a)) == C3.one


@pytest.mark.parametrize("h", algebras_up_to(3), ids=lambda h: f"dual{h.dual.n}-{h.dual.up}")
def test_relative_pseudocomplement_adjunction(h):
    els = h.elements
    for a in els:
        for b in els:
            ab = h.implies(a, b)
            for c in els:
                assert h.leq(c, ab) == h.leq(c & a, b)


def test_join_primes_are_principal_upsets():
    for h in algebras_up_to(3):
        els = h.elements
        brute = sorted(a for a in els if join_prime_brute(h, els, a))
        assert sorted(join_primes(h)) == brute == sorted(h.dual.up)


@pytest.mark.parametrize("p", posets_up_to(4), ids=str)
def test_duality_round_trip(p):
    h = HAlg(p)
    d, iso = dual_poset(h)
    assert is_isomorphic(d, p)


def test_tables_round_trip_and_planted_defect():
    t = tables_of(B4)
    h = validate_heyting_tables(t)
    assert h.size() == 4
    imp = [list(row) for row in t.imp]
    imp[t.one][t.zero] = t.one  # 1 -> 0 must be 0
    with pytest.raises(AxiomError) as exc:
        validate_heyting_tables(RawTables(t.size, t.meet, t.join, imp, t.zero, t.one))
    assert exc.value.identity


def test_non_distributive_lattice_rejected():
    # the diamond M3: 0 < a, b, c < 1
    n = 5
    leq = lambda i, j: i == j or i == 0 or j == 4  # noqa: E731
    meet = [[min(i, j) if leq(i, j) or leq(j, i) else 0 for j in range(n)] for i in range(n)]
    join = [[max(i, j) if leq(i, j) or leq(j, i) else 4 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if leq(i, j):
                meet[i][j], join[i][j] = i, j
            elif leq(j, i):
                meet[i][j], join[i][j] = j, i
    imp = [[4 if leq(i, j) else j for j in range(n)] for i in range(n)]
    with pytest.raises(AxiomError):
        validate_heyting_tables(RawTables(n, meet, join, imp, 0, 4))


def test_map_duality_injective_surjective():
    ps = posets_up_to(3)
    for p in ps:
        for q in ps:
            for f in pmorphisms(p, q):
                pm = PMorphism(p, q, f)
                hom = dual_of_pmorphism(pm)
                assert pm.is_injective() == hom.is_surjective()
                assert pm.is_surjective() == hom.is_injective()


def test_generated_subalgebra_of_c3_middle():
    a = C3.dual.up[1]
    sub, inc = generated_subalgebra(C3, [a])
    assert sub.size() == 3 and inc.is_injective()


def test_generated_partial_map_rejects_non_isomorphism():
    a = C3.dual.up[1]
    assert generated_partial_map(C3, [(a, C3.zero)]) is None
    swap = generated_partial_map(B4, [(0b01, 0b10)])
    assert swap is not None and swap[0b10] == 0b01


def test_automorphism_counts():
    assert len(automorphisms(C3)) == 1
    assert len(automorphisms(B4)) == 2
    assert len(automorphisms(HAlg(Poset.antichain(3)))) == 6


def test_add_bottom_c3_is_4_chain():
    hs, z0 = add_bottom(C3)
    assert hs.size() == 4
    assert all(hs.leq(x, y) or hs.leq(y, x) for x in hs.elements for y in hs.elements)


def test_star_example_from_negation():
    # (x -> y) at x = a, y = 0_C3 gives the image of ~a
    hs, z0 = add_bottom(C3)
    a = C3.dual.up[1]
    val = eval_term(parse_term("(-> x y)"), hs, {"x": a | z0, "y": z0})
    assert val == C3.neg(a) | z0 == z0


def _star_pairs(h: HAlg, x: int, depth: int) -> set[tuple[int, int]]:
    """All (t(x) in h, t*(x, 0_h) in h*) value pairs for terms up to ``depth``."""
    hs, z0 = add_bottom(h)
    layer = {(h.zero, z0), (h.one, hs.one), (x, x | z0)}
    for _ in range(depth):
        new = set(layer)
        for (u1, v1) in layer:
            for (u2, v2) in layer:
                new.add((u1 & u2, v1 & v2))
                new.add((u1 | u2, v1 | v2))
                new.add((h.implies(u1, u2), hs.implies(v1, v2)))
        layer = new
    return layer


def test_star_identity_by_value_pair_closure():
    from heytica.witnesses import one_generated_family

    for m in one_generated_family(3):
        _, z0 = add_bottom(m.algebra)
        for u, v in _star_pairs(m.algebra, m.generator, 3):
            assert v == u | z0


def test_star_identity_on_enumerated_terms():
    for h in algebras_up_to(2):
        hs, z0 = add_bottom(h)
        for x in h.elements:
            for t in terms_up_to(2):
                assert eval_term(star_term(t), hs, {"x": x | z0, "y": z0}) == eval_term(t, h, {"x": x}) | z0


def test_term_parsing_round_trip():
    t = parse_term("(-> (and x 1) 0)")
    assert str(parse_term(str(t))) == str(t)
    assert star_term(ZERO) == Y
    assert star_term(ONE) == ONE and star_term(X) == X
    assert isinstance(t, Term)


def test_json_round_trip():
    h = HAlg(Poset.antichain(2))
    assert algebra_from_json(algebra_to_json(h)).dual.up == h.dual.up


def test_bad_element_raises():
    with pytest.raises(BadElement):
        C3.check(0b01)  # {0} is not an up-set of the 2-chain


@given(st.integers(1, 4), st.data())
@settings(max_examples=40, deadline=None)
def test_closure_is_closed(n, data):
    h = data.draw(st.sampled_from(algebras_up_to(min(n, 3))))
    gens = data.draw(st.lists(st.sampled_from(h.elements), max_size=2))
    c = set(closure(h, gens))
    for a in c:
        for b in c:
            assert a & b in c and a | b in c and h.implies(a, b) in c


def test_hom_identity_and_composition():
    f = Hom(TWO, C3, PMorphism(C3.dual, TWO.dual, (0, 0)))
    assert f.then(Hom.identity(C3)).table() == f.table()
