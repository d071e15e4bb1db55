from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from n2zhu.superalg import (AFF_E, GL_PM, GL_PP, GL_Z, NS2_GM, NS2_GP, NS2_J, NS2_L,
                            AlgebraSpec, Parameters, build_algebra, check_super_jacobi,
                            spectral_flow_generator)

P32 = Parameters(3, 2)
NS2 = build_algebra("ns2", P32)


def test_parameters_derived_values():
    assert P32.a == Fraction(2, 3)
    assert P32.k == Fraction(-1, 2)
    assert P32.c == -1
    assert P32.k + 2 == Fraction(3, 2)


@pytest.mark.parametrize("p,pp,msg", [(1, 1, "p >= 2"), (2, 0, "p' >= 1"), (4, 2, "gcd")])
def test_parameters_reject(p, pp, msg):
    with pytest.raises(ValueError, match=msg):
        Parameters(p, pp)


def test_central_bindings():
    assert NS2.central == -1
    assert build_algebra("affine-sl2", P32).central == Fraction(-1, 2)
    gl = build_algebra("gl11")
    assert len(gl.families) == 4
    assert sum(f.odd for f in gl.families) == 2


def test_unknown_algebra():
    with pytest.raises(ValueError):
        build_algebra("e8", P32)


def test_bracket_examples():
    assert NS2.bracket((1, NS2_GP), (-1, NS2_GM)) == {((0, NS2_L),): 2, ((0, NS2_J),): 1}
    for r in (-3, -1, 1, 5):
        for s in (-1, 3):
            assert NS2.bracket((r, NS2_GP), (s, NS2_GP)) == {}
    assert NS2.bracket((4, NS2_L), (-4, NS2_L)) == {((0, NS2_L),): 4, (): Fraction(-1, 2)}
    gl = build_algebra("gl11")
    assert gl.bracket((0, GL_PP), (0, GL_PM)) == {((0, GL_Z),): 2}


def test_mode_lattice_enforced():
    with pytest.raises(ValueError):
        NS2.gen("G+", 1)
    with pytest.raises(ValueError):
        NS2.gen("L", Fraction(1, 2))
    with pytest.raises(ValueError):
        build_algebra("gl11").gen("Z", 1)


@pytest.mark.parametrize("name", ["ns2", "affine-sl2", "gl11"])
def test_jacobi_window_4(name):
    rep = check_super_jacobi(build_algebra(name, P32), 4)
    assert rep["violations"] == []
    assert rep["antisymmetry_violations"] == []


def test_jacobi_detects_corruption():
    def corrupt(x, y):
        out = NS2.bracket(x, y)
        if x[1] == NS2_J and y[1] == NS2_GP:
            return {k: -v for k, v in out.items()}
        return out
    bad = AlgebraSpec("ns2", NS2.families, NS2.central, P32, corrupt)
    rep = check_super_jacobi(bad, 2)
    assert rep["violations"] or rep["antisymmetry_violations"]


gens6 = st.sampled_from(NS2.generators(6))


@given(gens6, gens6)
def test_super_antisymmetry(x, y):
    s = 1 if NS2.is_odd(x) and NS2.is_odd(y) else -1
    assert NS2.bracket(x, y) == {k: s * v for k, v in NS2.bracket(y, x).items()}


def _flow_elem(theta, elem):
    out = {}
    for m, c in elem.items():
        img = spectral_flow_generator(NS2, theta, m[0]) if m else {(): Fraction(1)}
        for k, v in img.items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def _bracket_elem(e1, e2):
    out = {}
    for m1, c1 in e1.items():
        for m2, c2 in e2.items():
            if not m1 or not m2:
                continue
            for k, v in NS2.bracket(m1[0], m2[0]).items():
                out[k] = out.get(k, 0) + c1 * c2 * v
    return {k: v for k, v in out.items() if v}


gens4 = st.sampled_from(NS2.generators(4))
thetas = st.integers(-2, 2)


@given(gens4, gens4, thetas)
def test_flow_is_automorphism(x, y, th):
    lhs = _flow_elem(th, NS2.bracket(x, y))
    rhs = _bracket_elem(spectral_flow_generator(NS2, th, x), spectral_flow_generator(NS2, th, y))
    assert lhs == rhs


@given(gens4, thetas, thetas)
def test_flow_composition(x, t1, t2):
    assert _flow_elem(t1, spectral_flow_generator(NS2, t2, x)) == \
        _flow_elem(t1 + t2, {(x,): Fraction(1)})


def test_flow_examples():
    for g in NS2.generators(3):
        assert spectral_flow_generator(NS2, 0, g) == {(g,): 1}
    assert spectral_flow_generator(NS2, 1, (0, NS2_J)) == {((0, NS2_J),): 1, (): Fraction(-1, 3)}
    assert spectral_flow_generator(NS2, 1, (1, NS2_GP)) == {((3, NS2_GP),): 1}
    assert spectral_flow_generator(NS2, 1, (1, NS2_GM)) == {((-1, NS2_GM),): 1}


def test_flow_rejects_non_integer_and_other_algebras():
    with pytest.raises(ValueError):
        spectral_flow_generator(NS2, Fraction(1, 2), (0, NS2_L))
    with pytest.raises(ValueError):
        spectral_flow_generator(build_algebra("affine-sl2", P32), 1, (0, AFF_E))
