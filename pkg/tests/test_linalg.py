from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from depthtwo.linalg import (
    QQ,
    DimensionMismatchError,
    FieldMismatchError,
    Matrix,
    PrimeField,
    Quotient,
    Subspace,
    field_from_name,
    kernel,
    membership_certificate,
    rank,
    rref,
    solve_linear,
    solve_membership,
    vec_is_zero,
)

# independent oracles, deliberately naive


def _det_laplace(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    sign = 1
    for j in range(n):
        if rows[0][j] != 0:
            minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
            total += sign * rows[0][j] * _det_laplace(minor)
        sign = -sign
    return total


def _rank_by_minors(rows):
    nr, nc = len(rows), len(rows[0])
    for size in range(min(nr, nc), 0, -1):
        for rsel in combinations(range(nr), size):
            for csel in combinations(range(nc), size):
                sub = [[rows[i][j] for j in csel] for i in rsel]
                if _det_laplace(sub) != 0:
                    return size
    return 0


fractions_st = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9))


def small_matrix(max_dim=5):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(fractions_st, min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_rank3_example_against_minor_expansion():
    # a 5x7 product of integer matrices of inner dimension 3, so rank <= 3
    left = [[1, 2, 0], [0, 1, 1], [3, -1, 2], [1, 1, 1], [2, 0, -1]]
    right = [[1, 0, 2, -1, 3, 0, 1], [0, 1, 1, 1, 0, 2, -1], [2, -1, 0, 1, 1, 1, 0]]
    prod = [
        [sum(left[i][k] * right[k][j] for k in range(3)) for j in range(7)]
        for i in range(5)
    ]
    m = Matrix(QQ, prod)
    assert _rank_by_minors(prod) == 3
    assert rank(m) == 3
    assert kernel(m).dim == 7 - 3


def test_rref_canonical_small():
    m = Matrix(QQ, [[0, 2, 4], [1, 1, 1]])
    r, pivots = rref(m)
    assert pivots == [0, 1]
    assert r.to_lists() == [
        [Fraction(1), Fraction(0), Fraction(-1)],
        [Fraction(0), Fraction(1), Fraction(2)],
    ]


def test_kernel_of_sum_functional():
    sub = kernel(Matrix(QQ, [[1, 1]]))
    assert sub.dim == 1
    assert sub.basis == [[Fraction(1), Fraction(-1)]]


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rref_idempotent_and_shuffle_invariant(rows):
    m = Matrix(QQ, rows)
    r1, p1 = rref(m)
    r2, p2 = rref(r1)
    assert r1 == r2 and p1 == p2
    shuffled = list(rows)
    random.Random(7).shuffle(shuffled)
    r3, p3 = rref(Matrix(QQ, shuffled))
    assert r3 == r1 and p3 == p1


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rank_nullity(rows):
    m = Matrix(QQ, rows)
    assert rank(m) + kernel(m).dim == m.ncols


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_kernel_vectors_annihilate(rows):
    m = Matrix(QQ, rows)
    for v in kernel(m).basis:
        assert vec_is_zero(QQ, m.apply(v))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(fractions_st, min_size=6, max_size=6), min_size=1, max_size=4),
    st.lists(fractions_st, min_size=4, max_size=4),
)
def test_membership_by_substitution(vectors, coeffs):
    coeffs = coeffs[: len(vectors)]
    target = [
        sum((c * v[i] for c, v in zip(coeffs, vectors)), Fraction(0)) for i in range(6)
    ]
    found = solve_membership(QQ, vectors, target)
    assert found is not None
    rebuilt = [
        sum((c * v[i] for c, v in zip(found, vectors)), Fraction(0)) for i in range(6)
    ]
    assert rebuilt == target


def test_membership_10dim_fixed_combo():
    rng = random.Random(20240117)
    vectors = [[Fraction(rng.randint(-5, 5)) for _ in range(10)] for _ in range(4)]
    coeffs = [Fraction(3), Fraction(-2), Fraction(1, 2), Fraction(5)]
    target = [sum(c * v[i] for c, v in zip(coeffs, vectors)) for i in range(10)]
    found = solve_membership(QQ, vectors, target)
    assert found is not None
    assert [sum(c * v[i] for c, v in zip(found, vectors)) for i in range(10)] == target


def test_membership_refusal_dual_witness():
    vectors = [[1, 0, 0], [0, 1, 0]]
    target = [0, 0, 1]
    kind, y = membership_certificate(QQ, vectors, target)
    assert kind == "not_in_span"
    for v in vectors:
        assert sum(a * b for a, b in zip(y, v)) == 0
    assert sum(a * b for a, b in zip(y, target)) == 1


def test_solve_linear_inconsistent():
    m = Matrix(QQ, [[1, 0], [1, 0]])
    assert solve_linear(m, [1, 2]) is None
    sol = solve_linear(m, [3, 3])
    assert sol == [Fraction(3), Fraction(0)]


def test_prime_field_arithmetic():
    f5 = PrimeField(5)
    assert f5.inv(2) == 3
    assert f5.coerce("1/2") == 3
    m = Matrix(f5, [[1, 1], [2, 2]])
    assert rank(m) == 1
    assert kernel(m).basis == [[1, 4]]


def test_prime_field_rejects_composite():
    with pytest.raises(FieldMismatchError):
        PrimeField(6)


def test_field_from_name():
    assert field_from_name("q") == QQ
    assert field_from_name("fp:7") == PrimeField(7)
    with pytest.raises(FieldMismatchError):
        field_from_name("r")


def test_field_mismatch_between_matrices():
    a = Matrix(QQ, [[1]])
    b = Matrix(PrimeField(3), [[1]])
    with pytest.raises(FieldMismatchError):
        a @ b


def test_shape_mismatch():
    a = Matrix(QQ, [[1, 2]])
    with pytest.raises(DimensionMismatchError):
        a @ a


def test_subspace_membership_and_coords():
    s = Subspace.from_vectors(QQ, 3, [[1, 1, 0], [0, 0, 1]])
    assert s.contains([2, 2, 5])
    assert not s.contains([1, 0, 0])
    cs = s.coords([2, 2, 5])
    assert cs is not None
    assert s.from_coords(cs) == [Fraction(2), Fraction(2), Fraction(5)]


def test_subspace_sum_intersect():
    u = Subspace.from_vectors(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    w = Subspace.from_vectors(QQ, 3, [[0, 1, 0], [0, 0, 1]])
    assert u.sum(w).dim == 3
    inter = u.intersect(w)
    assert inter.dim == 1
    assert inter.basis == [[Fraction(0), Fraction(1), Fraction(0)]]


def test_quotient_projection_section():
    # K^3 modulo (1, 1, 0): free columns are 1 and 2
    q = Quotient(QQ, 3, [[1, 1, 0]])
    assert q.dim == 2
    assert q.project([1, 0, 0]) == [Fraction(-1), Fraction(0)]
    for k in range(q.dim):
        coords = [QQ.one if i == k else QQ.zero for i in range(q.dim)]
        assert q.project(q.section(coords)) == coords
    pm, sm = q.proj_matrix, q.sect_matrix
    assert (pm @ sm) == Matrix.identity(QQ, 2)


def test_matrix_kron_and_vec_roundtrip():
    a = Matrix(QQ, [[1, 2], [3, 4]])
    b = Matrix(QQ, [[0, 1], [1, 0]])
    k = a.kron(b)
    assert k.shape == (4, 4)
    assert k.rows[0][1] == Fraction(1) and k.rows[0][3] == Fraction(2)
    v = a.vec()
    assert Matrix.unvec(QQ, v, 2, 2) == a
