from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectify_kit.errors import InputError
from rectify_kit.exactlin import GF, QQ, FieldSpec, Matrix

from .oracles import bareiss_rank, exhaustive_kernel, modp_rank

F5 = GF(5)
F2 = GF(2)


def test_field_validation():
    assert FieldSpec(0).is_rational
    assert FieldSpec(7).characteristic == 7
    with pytest.raises(InputError):
        FieldSpec(4)
    with pytest.raises(InputError):
        FieldSpec(1)
    with pytest.raises(InputError):
        FieldSpec(1 << 21)  # beyond the int64-safe prime cap


def test_field_coerce():
    assert QQ.coerce("2/3") == Fraction(2, 3)
    assert F5.coerce("1/2") == 3  # inverse of 2 mod 5
    assert F5.coerce(-1) == 4
    with pytest.raises(InputError):
        F5.coerce("1/5")  # denominator vanishes mod 5
    with pytest.raises(InputError):
        QQ.coerce("a/b")


def test_rank_empty_matrix():
    assert Matrix.zero(QQ, 0, 0).rank() == 0


def test_rank_dependent_rows():
    m = Matrix.from_rows(QQ, [[1, 2], [2, 4]])
    assert m.rank() == 1


def test_rank_matches_independent_oracle_mod5():
    rng = random.Random(20260822)
    for _ in range(25):
        rows = [[rng.randrange(5) for _ in range(7)] for _ in range(5)]
        m = Matrix.from_rows(F5, rows)
        assert m.rank() == modp_rank(rows, 5)


def test_rank_matches_bareiss_over_q():
    rng = random.Random(4)
    for _ in range(25):
        rows = [[Fraction(rng.randrange(-6, 7), rng.randrange(1, 5)) for _ in range(6)] for _ in range(4)]
        m = Matrix.from_rows(QQ, rows)
        assert m.rank() == bareiss_rank(rows)


def test_kernel_identity_empty():
    assert Matrix.identity(QQ, 3).kernel_basis() == []


def test_kernel_zero_matrix_full():
    basis = Matrix.zero(F5, 2, 3).kernel_basis()
    assert len(basis) == 3


def test_kernel_f2_exhaustive():
    rows = [[1, 1, 0], [0, 0, 1]]
    basis = Matrix.from_rows(F2, rows).kernel_basis()
    assert basis == [(1, 1, 0)]
    # every kernel vector mod 2 is a combination of the basis
    vectors = set(exhaustive_kernel(rows, 2))
    assert vectors == {(0, 0, 0), (1, 1, 0)}


def test_solve_identity():
    m = Matrix.identity(QQ, 3)
    assert m.solve([1, 2, 3]) == (Fraction(1), Fraction(2), Fraction(3))


def test_solve_inconsistent():
    assert Matrix.zero(QQ, 2, 2).solve([0, 1]) is None


def test_solve_scalar_division():
    assert Matrix.from_rows(QQ, [[2]]).solve([1]) == (Fraction(1, 2),)


def test_solve_dimension_mismatch():
    with pytest.raises(InputError):
        Matrix.identity(QQ, 2).solve([1, 2, 3])


def test_rational_entries_canonical():
    m = Matrix.from_rows(QQ, [["2/4", Fraction(-3, -6)]])
    assert m.entry(0, 0) == Fraction(1, 2)
    assert m.entry(0, 0).denominator > 0
    assert m.entry(0, 1) == Fraction(1, 2)


@st.composite
def _modp_matrix(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    rows = draw(st.integers(min_value=0, max_value=6))
    cols = draw(st.integers(min_value=0, max_value=6))
    data = [[draw(st.integers(min_value=0, max_value=p - 1)) for _ in range(cols)] for _ in range(rows)]
    return p, rows, cols, data


@given(_modp_matrix())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(case):
    p, rows, cols, data = case
    m = Matrix(GF(p), rows, cols, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row)})
    assert m.rank() + len(m.kernel_basis()) == cols


@given(_modp_matrix())
@settings(max_examples=60, deadline=None)
def test_kernel_vectors_annihilated(case):
    p, rows, cols, data = case
    m = Matrix(GF(p), rows, cols, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row)})
    for vec in m.kernel_basis():
        assert all(v == 0 for v in m.apply(vec))


@given(_modp_matrix(), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_rank_row_permutation_invariant(case, rnd):
    p, rows, cols, data = case
    perm = list(range(rows))
    rnd.shuffle(perm)
    m1 = Matrix.from_rows(GF(p), data) if rows else Matrix.zero(GF(p), 0, cols)
    m2 = Matrix.from_rows(GF(p), [data[i] for i in perm]) if rows else m1
    assert m1.rank() == m2.rank()


@given(_modp_matrix())
@settings(max_examples=60, deadline=None)
def test_solve_recovers_consistent_rhs(case):
    p, rows, cols, data = case
    f = GF(p)
    m = Matrix.from_rows(f, data) if rows else Matrix.zero(f, 0, cols)
    x = [(i * 2 + 1) % p for i in range(cols)]
    b = m.apply(x)
    sol = m.solve(list(b))
    assert sol is not None
    assert m.apply(sol) == b


def test_solve_recovers_consistent_rhs_over_q():
    rng = random.Random(9)
    for _ in range(20):
        rows = [[rng.randrange(-4, 5) for _ in range(5)] for _ in range(3)]
        m = Matrix.from_rows(QQ, rows)
        x = [Fraction(rng.randrange(-3, 4), rng.randrange(1, 4)) for _ in range(5)]
        b = m.apply(x)
        sol = m.solve(list(b))
        assert sol is not None and m.apply(sol) == b


def test_matmul_associates_with_apply():
    a = Matrix.from_rows(F5, [[1, 2, 3], [4, 0, 1]])
    b = Matrix.from_rows(F5, [[2, 1], [0, 3], [1, 1]])
    v = [1, 4]
    assert a.mul(b).apply(v) == a.apply(b.apply(v))


def test_backend_agreement():
    # both elimination backends must produce identical results
    import numpy as np

    import rectify_kit.exactlin._fp_py as py

    try:
        import rectify_kit.exactlin._fpkernel as cy
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = random.Random(77)
    for _ in range(10):
        p = rng.choice([3, 5, 101])
        a = np.array([[rng.randrange(p) for _ in range(8)] for _ in range(6)], dtype=np.int64)
        r1, p1 = py.rref(a, p)
        r2, p2 = cy.rref(a, p)
        assert np.array_equal(r1, r2) and p1 == p2
        assert np.array_equal(py.kernel(a, p), cy.kernel(a, p))
        b = np.array([rng.randrange(p) for _ in range(6)], dtype=np.int64)
        s1 = py.solve(a, b, p)
        s2 = cy.solve(a, b, p)
        if s1 is None:
            assert s2 is None
        else:
            assert np.array_equal(s1, s2)
        assert np.array_equal(py.matmul(a, a.T, p), cy.matmul(a, a.T, p))
