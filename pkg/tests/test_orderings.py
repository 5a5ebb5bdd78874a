from __future__ import annotations

import itertools
import math

import pytest

from heytica.amalgam import Diagram
from heytica.catalog import algebras_up_to, embeddings_between
from heytica.errors import IncompatibleOrders, NotExtension
from heytica.heyting import B4, C3, TWO, HAlg, Hom
from heytica.orderings import (
    all_natural_orders,
    extend_order,
    is_admissible,
    kpt_witness,
    natural_order,
    order_forgetful_counterexample,
    ordered_amalgamate,
    prime_support,
    restricts_to,
)
from heytica.poset import PMorphism, Poset


def test_prime_support_examples():
    assert prime_support(C3, C3.zero) == []
    assert sorted(prime_support(C3, C3.one)) == sorted(C3.dual.up)
    assert sorted(prime_support(B4, B4.one)) == [0b01, 0b10]


def test_boolean_order_example():
    o = natural_order(B4, (0, 1))  # p = {0} before q = {1}
    assert o.full_order == [0b00, 0b01, 0b10, 0b11]


def test_chain_orders():
    for h in (TWO, C3):
        (o,) = all_natural_orders(h)
        assert o.full_order == sorted(h.elements, key=lambda x: x.bit_count())


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_admissible_counts(k):
    assert len(all_natural_orders(HAlg(Poset.chain(k)))) == 1
    assert len(all_natural_orders(HAlg(Poset.antichain(k)))) == math.factorial(k)


def test_prime_order_must_extend_algebra_order():
    with pytest.raises(NotExtension):
        natural_order(C3, (0, 1))


def test_key_and_rule_agree_and_are_total():
    for h in algebras_up_to(3):
        for o in all_natural_orders(h):
            keys = [o.key(a) for a in h.elements]
            assert len(set(keys)) == len(keys)
            for x, y in itertools.product(h.elements, repeat=2):
                assert o.less(x, y) == o.rule_less(x, y)
            # the natural order extends the lattice order
            for x, y in itertools.product(h.elements, repeat=2):
                if h.leq(x, y) and x != y:
                    assert o.less(x, y)


def test_is_admissible():
    o = all_natural_orders(B4)[0]
    assert is_admissible(B4, o.full_order)
    assert not is_admissible(B4, [0b11, 0b00, 0b01, 0b10])


def test_extend_order_restricts_everywhere():
    algs = algebras_up_to(3)
    for a in algs:
        for b in algs:
            for e in embeddings_between(a, b):
                for o in all_natural_orders(a):
                    o2 = extend_order(e, o)
                    assert restricts_to(o2, e, o)


def test_extend_order_example():
    # C3 into the algebra of (2-chain + point), dual surjection b->B, t->T, w->T
    p = Poset.from_relation(3, [(0, 1)])
    h = HAlg(p)
    e = Hom(C3, h, PMorphism(p, C3.dual, (0, 1, 1)))
    (o,) = all_natural_orders(C3)
    o2 = extend_order(e, o)
    assert restricts_to(o2, e, o)


def _two_into(h):
    return Hom(TWO, h, PMorphism(h.dual, TWO.dual, (0,) * h.dual.n))


def test_ordered_amalgam_of_three_chains():
    e = _two_into(C3)
    (o,) = all_natural_orders(C3)
    oa = ordered_amalgamate(Diagram.of(e, e), o, o)
    assert oa.amalgam.result.size() == 6
    assert restricts_to(oa.order, oa.amalgam.into_left, o)
    assert restricts_to(oa.order, oa.amalgam.into_right, o)


def test_ordered_amalgam_boolean_opposite_orders():
    e = _two_into(B4)
    o1, o2 = natural_order(B4, (0, 1)), natural_order(B4, (1, 0))
    oa = ordered_amalgamate(Diagram.of(e, e), o1, o2)
    assert restricts_to(oa.order, oa.amalgam.into_left, o1)
    assert restricts_to(oa.order, oa.amalgam.into_right, o2)


def test_ordered_amalgamation_counterexample():
    # B = C = algebra of (2-chain 0<1 plus point 2); both 1 and 2 map onto A's top
    p = Poset.from_relation(3, [(0, 1)])
    b = HAlg(p)
    e = Hom(C3, b, PMorphism(p, C3.dual, (0, 1, 1)))
    o1, o2 = natural_order(b, (1, 0, 2)), natural_order(b, (1, 2, 0))
    d = Diagram.of(e, e)
    from heytica.orderings import restriction

    assert restriction(o1, e) == restriction(o2, e)
    with pytest.raises(IncompatibleOrders):
        ordered_amalgamate(d, o1, o2)


def test_kpt_witness():
    rep = kpt_witness()
    assert rep.verdicts == {"condition_i": True, "condition_ii": True}
    assert "zyx" in rep.data["defeating_orders"]


def test_forgetful_counterexample():
    rep = order_forgetful_counterexample()
    assert all(rep.verdicts.values())
    assert rep.data["aut_H"] == 1 and rep.data["aut_H'"] == 2
