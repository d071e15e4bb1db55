from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from n2zhu import references
from n2zhu.reps import (CharacterSeries, closed_form_character, find_singular, flow_character,
                        is_singular, mff_vector, module_character, present_module,
                        simple_character, submodule_character)
from n2zhu.superalg import AFF_E, AFF_F, AFF_H, NS2_GM, NS2_J, NS2_L, Parameters

P32 = Parameters(3, 2)
P41 = Parameters(4, 1)
H, J = Fraction(1, 3), Fraction(1, 5)


@pytest.fixture(scope="module")
def verma():
    return present_module("verma-ns2", P32, h=H, j=J)


@pytest.fixture(scope="module")
def vac41():
    return present_module("vacuum-ns2", P41)


def test_unknown_kind():
    with pytest.raises(ValueError):
        present_module("nonsense", P32)


def test_gen_verma_heads():
    g1 = present_module("gen-verma-ns2", P32, m=1)
    assert (g1.h0, g1.q0) == (0, 0)
    g2 = present_module("gen-verma-ns2", P32, m=2)
    assert (g2.h0, g2.q0) == (Fraction(1, 3), Fraction(2, 3))
    vac = present_module("vacuum-ns2", P32)
    for lv, ch in ((Fraction(2), 0), (Fraction(5, 2), 1), (Fraction(3), -1)):
        assert g1.quotient().weight_space(lv, ch).dimension == \
            vac.quotient().weight_space(lv, ch).dimension


def test_weight_space_dims(verma):
    vac = present_module("vacuum-ns2", P32)
    assert vac.quotient().weight_space(Fraction(0), 0).dimension == 1
    assert vac.quotient().weight_space(Fraction(3, 2), 1).dimension == 1
    assert verma.quotient().weight_space(Fraction(1), J).dimension == 3


def test_act_vacuum_annihilated():
    vac = present_module("vacuum-ns2", P32)
    q = vac.quotient()
    one = vac.free.cyclic()
    assert not q.reduce(vac.free.act_gen_vec((-2, NS2_L), one))
    assert not q.reduce(vac.free.act_gen_vec((0, NS2_J), one))


def test_singular_41(vac41):
    vecs = find_singular(vac41, 3, 0)
    assert len(vecs) == 1
    free = vac41.free
    ref = free.act_elem(references.singular_element(4, 1), free.cyclic())
    k0 = min(ref)
    assert {k: c / ref[k0] for k, c in ref.items()} == {k: c / vecs[0][k0] for k, c in vecs[0].items()}
    assert not free.act_gen_vec((2, NS2_J), vecs[0])
    assert is_singular(vac41, vecs[0])


def test_singular_23():
    vac = present_module("vacuum-ns2", Parameters(2, 3))
    assert len(find_singular(vac, 3, 0)) == 1


def test_level_zero_singular(verma):
    assert find_singular(verma, 0, J) == [verma.free.cyclic()]


def test_w2_in_chiral_verma():
    from n2zhu import zhu
    model = zhu.FZModel(P32, Fraction(2, 3))
    _, w2 = zhu.w_vectors(model)
    assert w2 and is_singular(model.pres, w2)


def test_characters_agree(verma):
    top = verma.h0 + 3
    closed = closed_form_character("verma-ns2", P32, top, h=H, j=J)
    brute = module_character(verma, 3)
    assert closed.entries == brute.entries
    assert closed.get(H + Fraction(1, 2), J + 1) == 1
    assert closed.get(H + Fraction(1, 2), J - 1) == 1
    assert closed.get(H + 1, J) == 3


def test_generic_verma_is_simple(verma):
    assert simple_character(verma, 2).entries == module_character(verma, 2).entries


def test_simple_removes_singular(vac41):
    full = module_character(vac41, 3)
    simple = simple_character(vac41, 3)
    assert simple.get(3, 0) == full.get(3, 0) - 1


def test_submodule_characters(vac41):
    assert not submodule_character(vac41, [], 3).entries
    assert submodule_character(vac41, [vac41.free.cyclic()], 3).entries == \
        module_character(vac41, 3).entries
    (n,) = find_singular(vac41, 3, 0)
    assert submodule_character(vac41, [n], 3).get(3, 0) == 1


def test_flow_character_group_law(verma):
    ch = module_character(verma, 3)
    assert flow_character(ch, 0, P32.c).entries == ch.entries
    two = flow_character(flow_character(ch, 1, P32.c), 1, P32.c)
    assert two.entries == flow_character(ch, 2, P32.c).entries


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (3, 2), (4, 1)])
def test_mff_vector(p, r):
    P = Parameters(p, 1)
    assert mff_vector(P, r) == {((-2, AFF_E),) * (p - r): 1}
    pres = present_module("gen-verma-affine", P, m=r)
    free = pres.free
    v = free.act_elem(mff_vector(P, r), free.cyclic())
    assert is_singular(pres, v)
    assert {free.weight(k) for k in v} == {(p - r, 2 * p - r - 1)}
    img = free.act_word(((0, AFF_F),) * (p - r), v)
    q = pres.quotient()
    assert q.reduce(img)
    for x in ((2, AFF_E), (2, AFF_F), (2, AFF_H)):
        assert not q.reduce(free.act_gen_vec(x, img))


def test_mff_requires_pp_one():
    with pytest.raises(ValueError):
        mff_vector(P32, 1)


VERMA = present_module("verma-ns2", P32, h=H, j=J)
gens = st.sampled_from(VERMA.free.spec.generators(2))


@given(gens, gens)
def test_act_is_homomorphism(x, y):
    free, spec = VERMA.free, VERMA.free.spec
    v = free.act_word(((-2, NS2_L), (-1, NS2_GM)), free.cyclic())
    s = -1 if spec.is_odd(x) and spec.is_odd(y) else 1
    lhs = free.act_gen_vec(x, free.act_gen_vec(y, v))
    for k, c in free.act_gen_vec(y, free.act_gen_vec(x, v)).items():
        lhs[k] = lhs.get(k, 0) - s * c
    rhs = free.act_elem(spec.bracket(x, y), v)
    assert {k: c for k, c in lhs.items() if c} == {k: c for k, c in rhs.items() if c}


def test_character_series_arithmetic():
    a = CharacterSeries({(Fraction(0), Fraction(0)): 2}, Fraction(1))
    b = CharacterSeries({(Fraction(0), Fraction(0)): 2}, Fraction(1))
    assert not (a - b).entries
    assert (a + b).get(0, 0) == 4


@pytest.mark.parametrize("kind,ev", [("vacuum-ns2", {}), ("chiral-verma-ns2", {"j": Fraction(2, 3)})])
def test_uniform_presentation_agrees(kind, ev):
    free = present_module(kind, P32, **ev)
    rel = present_module(kind, P32, uniform=True, **ev)
    assert module_character(free, 3).entries == module_character(rel, 3).entries
