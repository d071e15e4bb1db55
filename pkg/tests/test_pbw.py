from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from n2zhu.pbw import DegreeCapExceeded, Pbw, parse_expr, super_commutator_defect
from n2zhu.superalg import NS2_GM, NS2_GP, NS2_J, NS2_L, Parameters, build_algebra

NS2 = build_algebra("ns2", Parameters(3, 2))
ENG = Pbw(NS2)
GENS = NS2.generators(2)


def test_normal_order_examples():
    got = ENG.normal_order([(1, ((1, NS2_GP), (-1, NS2_GM)))])
    assert got == {((-1, NS2_GM), (1, NS2_GP)): -1, ((0, NS2_L),): 2, ((0, NS2_J),): 1}
    assert ENG.normal_order([(1, ((-4, NS2_L), (-4, NS2_L)))]) == {((-4, NS2_L), (-4, NS2_L)): 1}
    assert ENG.normal_order([(1, ((-1, NS2_GP), (-1, NS2_GP)))]) == {}


def test_parse_expr_roundtrip():
    terms = parse_expr(NS2, "(+ (* 2 G+[1/2] G-[-1/2]) (* -1 L[0]))")
    assert terms == [(2, ((1, NS2_GP), (-1, NS2_GM))), (-1, ((0, NS2_L),))]


def test_bad_mode_rejected():
    with pytest.raises(ValueError):
        ENG.normal_order([(1, ((2, NS2_GP),))])


def test_degree_cap():
    eng = Pbw(NS2, degree_cap=3)
    with pytest.raises(DegreeCapExceeded):
        eng.normal_order([(1, ((-2, NS2_J),) * 4)])


def test_unit_law():
    x = {((-2, NS2_L), (1, NS2_GP)): Fraction(3)}
    assert ENG.multiply(x, {(): Fraction(1)}) == x
    assert ENG.multiply({(): Fraction(1)}, x) == x


words = st.lists(st.sampled_from(GENS), min_size=0, max_size=3).map(tuple)
elems = st.dictionaries(words, st.integers(-3, 3).map(Fraction), max_size=3)


def _clean(d):
    return {k: v for k, v in d.items() if v}


@given(elems, elems, elems)
def test_associativity(a, b, c):
    a, b, c = (ENG.normal_order(_clean(x)) for x in (a, b, c))
    assert ENG.multiply(ENG.multiply(a, b), c) == ENG.multiply(a, ENG.multiply(b, c))


@given(elems)
def test_idempotent(a):
    n = ENG.normal_order(_clean(a))
    assert ENG.normal_order(n) == n


@given(st.sampled_from(NS2.generators(4)), st.sampled_from(NS2.generators(4)))
def test_commutator_defect(x, y):
    lhs, rhs = super_commutator_defect(ENG, x, y)
    assert lhs == rhs


@given(words, words)
def test_parity_and_weight_additive(u, v):
    prod = ENG.normal_order([(1, u + v)])
    pu, pv = ENG.parity(u), ENG.parity(v)
    wu, wv = ENG.weight(u), ENG.weight(v)
    for m in prod:
        assert ENG.parity(m) == (pu + pv) % 2
        assert ENG.weight(m) == (wu[0] + wv[0], wu[1] + wv[1])
