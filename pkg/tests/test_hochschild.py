"""Tests for the relative cochain complex and degree-one generation.

Frozen values, recomputed by hand or by independent runs before pinning:
  * M_2|Diag_2: cochain dims [2, 4, 8, 16], coboundary ranks [1, 3, 5],
    cohomology dims [1, 0, 0]; the generation isomorphism is bijective in
    degrees 1, 2, 3 and the closed degree-3 inverse equals the recursive one.
  * identity extension on M_2: every space is the center (dim 1), delta_0
    vanishes, cohomology dims [1, 0, 0].
  * T_2|Diag_2: dims [2, 3, 4, 5], cohomology [1, 0, 0].
  * Grassmann algebra over the scalars: dims [4, 16, 64, 256],
    cohomology [2, 4, 6].
  * rational S_3 over A_3: dims [4, 8, 16, 32], cohomology [3, 0, 0]
    (degree zero is the group-algebra center).
  * corner copy of T_2 in M_3 at cap 2: dims [3, 9, 27], cohomology [1, 0].
"""

import pytest
from hypothesis import given, settings, strategies as st

from depthtwo.algebra import DimensionGuardError, Extension, ValidationError
from depthtwo.constructions import (
    build_example_32,
    build_exterior_example,
    build_matrix_family,
    group_algebra_extension,
    matrix_algebra,
)
from depthtwo.depth import check_d2
from depthtwo.hochschild import (
    Cochain,
    HochschildComplex,
    generation_isomorphism,
    inverse_degree_three,
    iterated_power,
)
from depthtwo.linalg import QQ, Matrix


M2_DIAG = build_matrix_family(2, QQ).matrix_over_diagonal
CX = HochschildComplex(M2_DIAG, cap=3)


def basis_cochain(cx, n, i):
    return Cochain(n, [QQ.one if k == i else QQ.zero for k in range(cx.dims[n])])


def is_zero_matrix(m):
    return all(all(x == QQ.zero for x in row) for row in m.rows)


def test_m2_diag_dims_and_cohomology():
    assert CX.dims == [2, 4, 8, 16]
    assert CX.delta_ranks == [1, 3, 5]
    assert CX.cohomology_dims == [1, 0, 0]


@pytest.mark.parametrize("name,build,cap,dims,h", [
    ("upper-2-diag", lambda: build_matrix_family(2, QQ).triangular_over_diagonal,
     3, [2, 3, 4, 5], [1, 0, 0]),
    ("exterior-ground", lambda: build_exterior_example(QQ).over_ground,
     3, [4, 16, 64, 256], [2, 4, 6]),
    ("s3-a3", lambda: group_algebra_extension(["(1 2 3)", "(1 2)"], ["(1 2 3)"], QQ).extension,
     3, [4, 8, 16, 32], [3, 0, 0]),
    ("example-3-2", lambda: build_example_32(QQ).extension,
     2, [3, 9, 27], [1, 0]),
])
def test_delta_squared_zero_and_frozen_dims(name, build, cap, dims, h):
    cx = HochschildComplex(build(), cap=cap)
    assert cx.dims == dims
    assert cx.cohomology_dims == h
    for n in range(cap - 1):
        assert is_zero_matrix(cx.deltas[n + 1] @ cx.deltas[n]), (name, n)


def test_delta_squared_zero_on_m2_diag():
    for n in range(CX.cap - 1):
        assert is_zero_matrix(CX.deltas[n + 1] @ CX.deltas[n])


def test_delta_zero_is_the_commutator():
    a = M2_DIAG.total
    r = M2_DIAG.centralizer().subspace.basis[1]
    coch = CX.degree_zero_cochain(r)
    image = CX.matrix_of(CX.delta(coch))
    expected = a.right_mult(r) - a.left_mult(r)
    cols = [expected.col(CX.spaces[1].power.free_cols[t])
            for t in range(CX.spaces[1].power.dim)]
    assert image == Matrix.from_cols(QQ, cols, nrows=a.dim)


def test_identity_extension_trivial_complex():
    cx = HochschildComplex(Extension.identity(matrix_algebra(2, QQ)), cap=3)
    assert cx.dims == [1, 1, 1, 1]
    assert is_zero_matrix(cx.deltas[0])
    assert cx.cohomology_dims == [1, 0, 0]


def test_unit_cochain_is_the_cup_unit():
    one = CX.unit_cochain()
    for n in range(CX.cap + 1):
        for i in range(CX.dims[n]):
            g = basis_cochain(CX, n, i)
            assert CX.cup(one, g).coords == g.coords
            assert CX.cup(g, one).coords == g.coords


def test_cup_of_one_cochains_is_pairwise_product():
    a = M2_DIAG.total
    sp1, sp2 = CX.spaces[1], CX.spaces[2]
    for i in range(CX.dims[1]):
        for j in range(CX.dims[1]):
            got = CX.matrix_of(CX.cup(basis_cochain(CX, 1, i), basis_cochain(CX, 1, j)))
            al, be = sp1.hom.basis[i], sp1.hom.basis[j]
            cols = []
            for t in range(sp2.power.dim):
                x, y = divmod(sp2.power.free_cols[t], a.dim)
                cols.append(a.mul(al.col(x), be.col(y)))
            assert got == Matrix.from_cols(QQ, cols, nrows=a.dim)


def leibniz_holds(cx, fc, gc):
    lhs = cx.delta(cx.cup(fc, gc)).coords
    t1 = cx.cup(cx.delta(fc), gc).coords
    t2 = cx.cup(fc, cx.delta(gc)).coords
    sign = QQ.one if fc.degree % 2 == 0 else QQ.neg(QQ.one)
    rhs = [QQ.add(x, QQ.mul(sign, y)) for x, y in zip(t1, t2)]
    return lhs == rhs


def test_leibniz_on_all_basis_pairs():
    count = 0
    for m in range(CX.cap):
        for n in range(CX.cap):
            if m + n + 1 > CX.cap:
                continue
            for i in range(CX.dims[m]):
                for j in range(CX.dims[n]):
                    assert leibniz_holds(CX, basis_cochain(CX, m, i), basis_cochain(CX, n, j))
                    count += 1
    assert count == 68


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4),
       st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_leibniz_on_random_one_cochains(fs, gs):
    fc = Cochain(1, [QQ.coerce(x) for x in fs])
    gc = Cochain(1, [QQ.coerce(x) for x in gs])
    assert leibniz_holds(CX, fc, gc)


def test_degree_cap_enforced():
    top = basis_cochain(CX, 3, 0)
    with pytest.raises(ValidationError, match="cap"):
        CX.delta(top)
    with pytest.raises(ValidationError, match="cap"):
        CX.cup(top, basis_cochain(CX, 1, 0))
    with pytest.raises(ValidationError):
        HochschildComplex(M2_DIAG, cap=0)


def test_power_dimension_guard():
    with pytest.raises(DimensionGuardError):
        iterated_power(M2_DIAG, 3, dim_guard=10)


def test_generation_isomorphism_all_degrees():
    cert = check_d2(M2_DIAG, side="right").right
    for n, expect_dim in ((1, 4), (2, 8), (3, 16)):
        iso = generation_isomorphism(M2_DIAG, cert, n, complex_=CX)
        assert iso.bijective
        assert iso.forward.shape == (expect_dim, expect_dim)
        if n >= 2:
            assert iso.s_power.dim == expect_dim


def test_degree_three_closed_inverse_matches_recursion():
    cert = check_d2(M2_DIAG, side="right").right
    iso = generation_isomorphism(M2_DIAG, cert, 3, complex_=CX)
    assert inverse_degree_three(M2_DIAG, cert, CX) == iso.inverse


def test_generation_isomorphism_identity_extension():
    ident = Extension.identity(matrix_algebra(2, QQ))
    cert = check_d2(ident, side="right").right
    iso = generation_isomorphism(ident, cert, 3)
    assert iso.bijective
    assert iso.forward.shape == (1, 1)


def test_generation_isomorphism_guards():
    left = check_d2(M2_DIAG, side="left").left
    with pytest.raises(ValidationError, match="right"):
        generation_isomorphism(M2_DIAG, left, 2, complex_=CX)
    cert = check_d2(M2_DIAG, side="right").right
    other = build_matrix_family(2, QQ).matrix_over_triangular
    with pytest.raises(ValidationError, match="different extension"):
        generation_isomorphism(other, cert, 2)
    with pytest.raises(ValidationError):
        generation_isomorphism(M2_DIAG, cert, 0, complex_=CX)
    small = HochschildComplex(M2_DIAG, cap=1)
    with pytest.raises(ValidationError, match="cap"):
        generation_isomorphism(M2_DIAG, cert, 2, complex_=small)
