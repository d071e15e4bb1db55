from fractions import Fraction

from hypothesis import given, strategies as st

from n2zhu.exactla import Echelon, RationalMatrix, membership, nullspace, rref


def test_rref_examples():
    assert rref(RationalMatrix.from_dense([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))[0] == 3
    rank, piv, _ = rref(RationalMatrix.from_dense([[1, 2], [2, 4]]))
    assert (rank, piv) == (1, [0])


def test_nullspace_examples():
    assert len(nullspace(RationalMatrix(2, 3, {}))) == 3
    assert nullspace(RationalMatrix.from_dense([[1, -1]])) == [[1, 1]]


def test_membership_examples():
    assert membership([[1, 2]], [1, 2]) == [1]
    assert membership([[0, 1]], [1, 0]) is None


matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@given(matrices)
def test_rank_nullity(data):
    m = RationalMatrix.from_dense(data)
    rank, _, red = rref(m)
    ns = nullspace(m)
    assert rank + len(ns) == m.cols
    for v in ns:
        assert all(x == 0 for x in m.apply(v))
        assert next(x for x in v if x) == 1
    assert rref(red)[2] == red


@given(matrices, st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_membership_coordinates(data, coeffs):
    span = [list(map(Fraction, r)) for r in data]
    n = len(span[0])
    v = [sum(c * r[i] for c, r in zip(coeffs, span)) for i in range(n)]
    coords = membership(span, v)
    assert coords is not None
    assert [sum(c * r[i] for c, r in zip(coords, span)) for i in range(n)] == v


def test_echelon_contains():
    e = Echelon()
    assert e.add({0: 1, 2: 1})
    assert not e.add({0: 2, 2: 2})
    assert e.contains({0: 3, 2: 3})
    assert not e.contains({1: 1})
