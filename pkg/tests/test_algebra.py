"""Structural layer: algebras, extensions, tensor squares, hom spaces.

Expected dimensions are frozen from hand counts, not from the engine:
matrix algebras over their diagonal decompose through the orthogonal
idempotents e_ii, so dim(A (x)_B A) = sum_i dim(A e_ii) * dim(e_ii A).
For M_n that is n^3; for upper triangular T_n it is sum_i i * (n + 1 - i).
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from depthtwo.algebra import (
    Algebra,
    Bimodule,
    Extension,
    RefusalWitness,
    SummandCertificate,
    ValidationError,
    add_membership,
    bimodule_hom_space,
    casimir_elements,
    center,
    central_elements,
    compose_extensions,
    end_algebra_of,
    ideal_generated,
    is_two_sided_ideal,
    left_module,
    regular_bimodule,
    subalgebra_from_vectors,
    validate_algebra,
    validate_bimodule,
    validate_extension,
)
from depthtwo.linalg import QQ, Matrix, Subspace, vec_dot


def matrix_algebra(field, n):
    dim = n * n

    def idx(i, j):
        return i * n + j

    z, one = field.zero, field.one
    sc = [[[z] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j == k:
                        sc[idx(i, j)][idx(k, l)][idx(i, l)] = one
    unit = [z] * dim
    for i in range(n):
        unit[idx(i, i)] = one
    return Algebra(field, sc, unit)


def triangular_algebra(field, n):
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    pos = {p: k for k, p in enumerate(pairs)}
    dim = len(pairs)
    z, one = field.zero, field.one
    sc = [[[z] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j), a in pos.items():
        for (k, l), b in pos.items():
            if j == k:
                sc[a][b][pos[(i, l)]] = one
    unit = [z] * dim
    for i in range(n):
        unit[pos[(i, i)]] = one
    return Algebra(field, sc, unit), pos


def diagonal_algebra(field, n):
    z, one = field.zero, field.one
    sc = [[[z] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        sc[i][i][i] = one
    return Algebra(field, sc, [one] * n)


def diag_in_matrix(field, n):
    m = matrix_algebra(field, n)
    d = diagonal_algebra(field, n)
    cols = []
    for i in range(n):
        v = [field.zero] * (n * n)
        v[i * n + i] = field.one
        cols.append(v)
    return Extension(d, m, Matrix.from_cols(field, cols, nrows=n * n))


def diag_in_triangular(field, n):
    t, pos = triangular_algebra(field, n)
    d = diagonal_algebra(field, n)
    cols = []
    for i in range(n):
        v = [field.zero] * t.dim
        v[pos[(i, i)]] = field.one
        cols.append(v)
    return Extension(d, t, Matrix.from_cols(field, cols, nrows=t.dim))


M2 = matrix_algebra(QQ, 2)
DIAG_M2 = diag_in_matrix(QQ, 2)


def test_matrix_algebra_valid():
    assert validate_algebra(M2).ok
    assert validate_extension(DIAG_M2).ok


def test_broken_associativity_reported():
    sc = [[list(v) for v in row] for row in M2.sc]
    sc[1][2][0] = QQ.coerce(5)  # e01 * e10 now wrong
    bad = Algebra(QQ, sc, M2.unit)
    rep = validate_algebra(bad)
    assert not rep.ok
    assert "associativity" in rep.failures[0] or "unit" in rep.failures[0]


def test_broken_unit_reported():
    bad = Algebra(QQ, M2.sc, [1, 1, 0, 1])
    rep = validate_algebra(bad)
    assert not rep.ok
    assert "unit" in rep.failures[0]


def test_center_of_m2_is_scalars():
    z = center(M2)
    assert z.dim == 1
    assert z.subspace.contains(M2.unit)


def test_centralizer_of_diag_in_m2():
    c = DIAG_M2.centralizer()
    assert c.dim == 2
    assert c.subspace.contains([1, 0, 0, 0])
    assert c.subspace.contains([0, 0, 0, 1])
    assert not c.subspace.contains([0, 1, 0, 0])
    assert validate_algebra(c.algebra).ok


def test_tensor_square_m2_over_diag():
    ts = DIAG_M2.tensor_square()
    assert ts.dim == 8  # n^3 by the Peirce count
    assert central_elements(ts).dim == 4
    assert casimir_elements(ts).dim == 2


def test_tensor_square_triangular_chain_counts():
    for n in (2, 3):
        ext = diag_in_triangular(QQ, n)
        expected = sum(i * (n + 1 - i) for i in range(1, n + 1))
        assert ext.tensor_square().dim == expected


def test_mu_multiplies():
    ts = DIAG_M2.tensor_square()
    x = [Fraction(1), Fraction(2), Fraction(0), Fraction(-1)]
    y = [Fraction(3), Fraction(0), Fraction(1), Fraction(1)]
    q = ts.project_pair(x, y)
    assert ts.mu.apply(q) == M2.mul(x, y)
    assert ts.mu.apply(ts.one_one) == M2.unit


def test_tensor_square_identity_extension_collapses():
    ts = Extension.identity(M2).tensor_square()
    assert ts.dim == M2.dim
    x = [Fraction(0), Fraction(1), Fraction(1), Fraction(0)]
    y = [Fraction(2), Fraction(0), Fraction(0), Fraction(5)]
    assert ts.mu.apply(ts.project_pair(x, y)) == M2.mul(x, y)


def test_tensor_square_bimodules_validate():
    ts = DIAG_M2.tensor_square()
    for left in ("base", "total"):
        for right in ("base", "total"):
            assert validate_bimodule(ts.bimodule(left, right)).ok


def test_quotient_projection_section():
    ts = DIAG_M2.tensor_square()
    pm, sm = ts.quotient.proj_matrix, ts.quotient.sect_matrix
    assert pm @ sm == Matrix.identity(QQ, ts.dim)


def test_end_bimodule_dims():
    # S = End of A as a B-B-bimodule; for M_2 over its diagonal each Peirce
    # component K e_ij scales independently, so dim S = 4.
    s_hom = bimodule_hom_space(DIAG_M2.as_bimodule("base", "base"), DIAG_M2.as_bimodule("base", "base"))
    assert s_hom.dim == 4
    s_alg = end_algebra_of(s_hom)
    assert validate_algebra(s_alg).ok

    ident = Extension.identity(M2)
    e_hom = bimodule_hom_space(ident.as_bimodule("base", "base"), ident.as_bimodule("base", "base"))
    assert e_hom.dim == center(M2).dim == 1


def test_regular_bimodule_and_column_module():
    assert validate_bimodule(regular_bimodule(M2)).ok
    cols = [Matrix(QQ, [[1, 0], [0, 0]]), Matrix(QQ, [[0, 1], [0, 0]]),
            Matrix(QQ, [[0, 0], [1, 0]]), Matrix(QQ, [[0, 0], [0, 1]])]
    col_mod = left_module(M2, 2, cols)
    assert validate_bimodule(col_mod).ok
    end = bimodule_hom_space(col_mod, col_mod)
    assert end.dim == 1  # Schur


def test_column_module_summand_of_regular():
    cols = [Matrix(QQ, [[1, 0], [0, 0]]), Matrix(QQ, [[0, 1], [0, 0]]),
            Matrix(QQ, [[0, 0], [1, 0]]), Matrix(QQ, [[0, 0], [0, 1]])]
    col_mod = left_module(M2, 2, cols)
    reg = left_module(M2, 4, [M2.left_mult(M2.basis_vec(i)) for i in range(4)])
    cert = add_membership(col_mod, reg)
    assert isinstance(cert, SummandCertificate)
    assert cert.verify(col_mod, reg)


def test_add_membership_positive_diag_against_m2():
    d = DIAG_M2.base
    diag_bim = regular_bimodule(d)
    m2_as_dd = DIAG_M2.as_bimodule("base", "base")
    cert = add_membership(diag_bim, m2_as_dd)
    assert isinstance(cert, SummandCertificate)
    assert cert.verify(diag_bim, m2_as_dd)
    total = Matrix.zeros(QQ, 2, 2)
    for fo, gi in zip(cert.maps_out, cert.maps_in):
        total = total + gi @ fo
    assert total == Matrix.identity(QQ, 2)


def test_add_membership_refusal_with_dual_witness():
    d = DIAG_M2.base
    diag_bim = regular_bimodule(d)
    m2_as_dd = DIAG_M2.as_bimodule("base", "base")
    out = add_membership(m2_as_dd, diag_bim)
    assert isinstance(out, RefusalWitness)
    assert out.span_dim == 2
    assert out.end_dim == 4
    assert out.codim == 2
    # the functional kills every composite and takes value 1 on the identity
    hom_mp = bimodule_hom_space(m2_as_dd, diag_bim)
    hom_pm = bimodule_hom_space(diag_bim, m2_as_dd)
    y = out.dual_functional
    for fo in hom_mp.basis:
        for gi in hom_pm.basis:
            assert vec_dot(QQ, y, (gi @ fo).vec()) == 0
    assert vec_dot(QQ, y, Matrix.identity(QQ, 4).vec()) == 1


def test_ideal_generated_in_t2():
    t2, pos = triangular_algebra(QQ, 2)
    e01 = [QQ.zero] * 3
    e01[pos[(0, 1)]] = QQ.one
    ideal = ideal_generated(t2, [e01])
    assert ideal.dim == 1
    assert is_two_sided_ideal(t2, ideal)

    e00 = [QQ.zero] * 3
    e00[pos[(0, 0)]] = QQ.one
    bigger = ideal_generated(t2, [e00])
    assert bigger.dim == 2
    assert bigger.contains(e01)
    assert is_two_sided_ideal(t2, bigger)

    diag = Subspace.from_vectors(QQ, 3, [e00])
    assert not is_two_sided_ideal(t2, diag)


def test_compose_extensions_matches_direct():
    t2, pos = triangular_algebra(QQ, 2)
    d2 = diag_in_triangular(QQ, 2)
    # T_2 inside M_2 on the matching matrix units
    cols = []
    for (i, j) in sorted(pos, key=pos.get):
        v = [QQ.zero] * 4
        v[i * 2 + j] = QQ.one
        cols.append(v)
    t_in_m = Extension(t2, M2, Matrix.from_cols(QQ, cols, nrows=4))
    assert validate_extension(t_in_m).ok
    composed = compose_extensions(d2, t_in_m)
    assert composed.map_matrix == DIAG_M2.map_matrix
    with pytest.raises(ValidationError):
        compose_extensions(t_in_m, d2)


def test_subalgebra_needs_unit_and_closure():
    with pytest.raises(ValidationError):
        subalgebra_from_vectors(M2, [[0, 1, 0, 0]])  # no unit
    with pytest.raises(ValidationError):
        subalgebra_from_vectors(M2, [[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]])  # not closed
    ok = subalgebra_from_vectors(M2, [[1, 0, 0, 1], [0, 1, 0, 0]])
    assert ok.dim == 2
    assert validate_algebra(ok.algebra).ok


def test_bimodule_validation_catches_tampering():
    bim = DIAG_M2.as_bimodule("base", "total")
    bad = Bimodule(bim.left, bim.right, bim.dim, bim.left_ops, list(bim.right_ops))
    bad.right_ops[1] = bad.right_ops[1].scale(2)
    assert not validate_bimodule(bad).ok


def _conjugated_diag(a, b):
    """Diagonal embedding of K^2 into M_2 twisted by a unipotent change of basis."""
    g = [Fraction(1), Fraction(a), Fraction(0), Fraction(1)]  # [[1, a], [0, 1]]
    h = [Fraction(1), Fraction(0), Fraction(b), Fraction(1)]
    u = M2.mul(g, h)
    uinv = M2.mul([Fraction(1), Fraction(0), Fraction(-b), Fraction(1)],
                  [Fraction(1), Fraction(-a), Fraction(0), Fraction(1)])
    assert M2.mul(u, uinv) == M2.unit
    cols = []
    for i in range(2):
        e = [Fraction(0)] * 4
        e[i * 2 + i] = Fraction(1)
        cols.append(M2.mul(M2.mul(u, e), uinv))
    return Extension(diagonal_algebra(QQ, 2), M2, Matrix.from_cols(QQ, cols, nrows=4))


@settings(max_examples=25, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_dims_invariant_under_conjugation(a, b):
    ext = _conjugated_diag(a, b)
    assert validate_extension(ext).ok
    assert ext.centralizer().dim == 2
    assert ext.tensor_square().dim == 8
    assert central_elements(ext.tensor_square()).dim == 4
