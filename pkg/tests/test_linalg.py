from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import smith_normal_form

from hypersd.linalg import (
    GF,
    QQ,
    ZZ,
    CoefficientRing,
    Echelon,
    RingError,
    SparseMatrix,
    invariant_factors,
    kernel,
    rank,
)

small_ints = st.integers(-4, 4)


@st.composite
def int_matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    return [[draw(small_ints) for _ in range(c)] for _ in range(r)], r, c


def sm(rows, ncols):
    m = SparseMatrix.from_dense(rows) if rows else SparseMatrix(0, ncols)
    return m


def sympy_invariants(rows, r, c):
    if r == 0 or c == 0:
        return []
    d = smith_normal_form(Matrix(rows), domain=SZZ)
    return sorted(abs(d[i, i]) for i in range(min(r, c)) if d[i, i] != 0)


class TestRings:
    def test_parse(self):
        assert CoefficientRing.parse("z") == ZZ
        assert CoefficientRing.parse("Q") == QQ
        assert CoefficientRing.parse("gf3") == GF(3)
        assert CoefficientRing.parse("GF(5)").p == 5

    @pytest.mark.parametrize("bad", ["gf4", "gf1", "r", "gf"])
    def test_parse_rejects(self, bad):
        with pytest.raises(RingError):
            CoefficientRing.parse(bad)

    def test_names(self):
        assert [ZZ.name, QQ.name, GF(2).name] == ["Z", "Q", "GF2"]

    def test_inverse_mod_p(self):
        assert GF(7).mul(3, GF(7).inv(3)) == 1


class TestSparseMatrix:
    def test_dense_roundtrip(self):
        rows = [[1, 0, 2], [0, 0, -1]]
        assert SparseMatrix.from_dense(rows).to_dense() == rows

    def test_matmul_matches_dense(self):
        a = SparseMatrix.from_dense([[1, 2], [3, 4]])
        b = SparseMatrix.from_dense([[0, 1], [1, 0]])
        assert a.matmul(b, ZZ).to_dense() == [[2, 1], [4, 3]]

    def test_add_with_scale(self):
        a = SparseMatrix.identity(2)
        assert a.add(a, ZZ, scale=-1).is_zero()


class TestRankAndSmith:
    @given(int_matrices())
    @settings(max_examples=150, deadline=None)
    def test_rank_matches_sympy(self, data):
        rows, r, c = data
        expected = Matrix(rows).rank() if r and c else 0
        assert rank(sm(rows, c), QQ) == expected
        assert rank(sm(rows, c), ZZ) == expected

    @given(int_matrices())
    @settings(max_examples=150, deadline=None)
    def test_invariant_factors_match_sympy(self, data):
        rows, r, c = data
        assert invariant_factors(sm(rows, c)) == sympy_invariants(rows, r, c)

    @given(int_matrices())
    @settings(max_examples=80, deadline=None)
    def test_rank_mod_p_matches_dense_elimination(self, data):
        rows, r, c = data
        if not (r and c):
            return
        m = [[x % 3 for x in row] for row in rows]
        assert rank(SparseMatrix.from_dense(m), GF(3)) == _rank_mod_p(m, 3)

    def test_known_torsion(self):
        assert invariant_factors(SparseMatrix.from_dense([[2, 0], [0, 3]])) == [1, 6]
        assert invariant_factors(SparseMatrix.from_dense([[2, 4], [4, 8]])) == [2]

    def test_divisibility_chain(self):
        f = invariant_factors(SparseMatrix.from_dense([[6, 0, 0], [0, 10, 0], [0, 0, 15]]))
        assert f == [1, 30, 30]


def _rank_mod_p(rows, p):
    m = [list(r) for r in rows]
    rk = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = pow(m[rk][c], -1, p)
        for i in range(len(m)):
            if i != rk and m[i][c] % p:
                f = m[i][c] * inv
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


class TestKernel:
    @given(int_matrices())
    @settings(max_examples=150, deadline=None)
    def test_kernel_is_saturated_basis(self, data):
        rows, r, c = data
        a = sm(rows, c)
        k = kernel(a, ZZ)
        assert len(k) == c - rank(a, QQ)
        for v in k.basis:
            assert a.apply(v, ZZ) == {}
        if len(k):
            # saturated: the basis matrix has all invariant factors equal to 1
            assert invariant_factors(k.matrix()) == [1] * len(k)

    @given(int_matrices(), st.lists(small_ints, min_size=6, max_size=6))
    @settings(max_examples=100, deadline=None)
    def test_coordinates_invert_lift(self, data, coeffs):
        rows, r, c = data
        k = kernel(sm(rows, c), ZZ)
        coeffs = coeffs[: len(k)]
        v = {}
        for x, b in zip(coeffs, k.basis):
            for i, y in b.items():
                v[i] = v.get(i, 0) + x * y
        v = {i: y for i, y in v.items() if y}
        assert list(k.coordinates(v)) == coeffs

    def test_saturation_example(self):
        # kernel of (2, -2) over Z is spanned by (1, 1), not (2, 2)
        k = kernel(SparseMatrix.from_dense([[2, -2]]), ZZ)
        assert [sorted(v.items()) for v in k.basis] in ([[(0, 1), (1, 1)]], [[(0, -1), (1, -1)]])

    def test_field_kernel(self):
        k = kernel(SparseMatrix.from_dense([[1, 1]]), GF(2))
        assert len(k) == 1 and k.basis[0] == {0: 1, 1: 1}


class TestEchelon:
    def test_reduce_and_add(self):
        e = Echelon(QQ)
        assert e.add({0: 2, 1: 2})
        assert not e.add({0: 1, 1: 1})
        assert e.reduce({0: 1, 1: 1}) == {}
        assert e.reduce({0: 1}) == {1: -1}

    def test_rejects_integers(self):
        with pytest.raises(RingError):
            Echelon(ZZ)

    def test_fractions(self):
        e = Echelon(QQ)
        e.add({0: 3, 1: 1})
        assert e.reduce({0: 1}) == {1: Fraction(-1, 3)}
