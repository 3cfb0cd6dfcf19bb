"""Finite-dimensional algebras, extensions, bimodules and tensor squares.

Everything is coordinatized: an algebra is its structure constants over a
field, an extension is the matrix of a unit-preserving homomorphism from the
base into the total algebra, and a bimodule is a carrier dimension together
with one action matrix per basis element of each acting algebra.

The decision procedures at the bottom (bimodule_hom_space, add_membership)
reduce "is M a direct summand of a finite power of P" to exact linear
algebra: hom spaces are kernels of intertwining constraints, and the summand
test asks whether the identity of M lies in the span of composites g . f
with f : M -> P and g : P -> M running over hom-space bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import List, Optional, Sequence, Tuple

from .linalg import (
    DimensionMismatchError,
    FieldMismatchError,
    Matrix,
    Quotient,
    Subspace,
    kernel,
    membership_certificate,
    tensor_vec,
    unit_vec,
    zero_vec,
    _rref_sparse,
)

DEFAULT_DIM_GUARD = 20000


class ValidationError(Exception):
    """Structural input that fails its defining laws (with the first witness)."""


class DimensionGuardError(Exception):
    """A construction would exceed the configured dimension bound."""


@dataclass
class ValidationReport:
    ok: bool
    failures: List[str] = dc_field(default_factory=list)

    def raise_if_bad(self):
        if not self.ok:
            raise ValidationError(self.failures[0])
        return self


class Algebra:
    """Associative unital algebra by structure constants.

    sc[i][j] is the coordinate vector of e_i * e_j; unit is the coordinate
    vector of 1. Validation is a separate call so that deliberately broken
    inputs can be inspected.
    """

    __slots__ = ("field", "dim", "sc", "unit", "_triples")

    def __init__(self, field, sc: Sequence[Sequence[Sequence]], unit: Sequence):
        self.field = field
        self.dim = len(sc)
        z = field.zero
        self.sc = [
            [[field.coerce(x) for x in sc[i][j]] for j in range(self.dim)]
            for i in range(self.dim)
        ]
        for i in range(self.dim):
            if len(sc[i]) != self.dim:
                raise DimensionMismatchError("structure constants not cubic")
            for j in range(self.dim):
                if len(self.sc[i][j]) != self.dim:
                    raise DimensionMismatchError("structure constants not cubic")
        self.unit = [field.coerce(x) for x in unit]
        if len(self.unit) != self.dim:
            raise DimensionMismatchError("unit length")
        self._triples = [
            [
                tuple((k, v) for k, v in enumerate(self.sc[i][j]) if v != z)
                for j in range(self.dim)
            ]
            for i in range(self.dim)
        ]

    @classmethod
    def ground(cls, field) -> "Algebra":
        """The one-dimensional algebra K."""
        return cls(field, [[[field.one]]], [field.one])

    def mul(self, x: Sequence, y: Sequence) -> list:
        f = self.field
        z, add, mul = f.zero, f.add, f.mul
        out = [z] * self.dim
        for i, xi in enumerate(x):
            if xi == z:
                continue
            ti = self._triples[i]
            for j, yj in enumerate(y):
                if yj == z:
                    continue
                c = mul(xi, yj)
                for k, v in ti[j]:
                    out[k] = add(out[k], mul(c, v))
        return out

    def left_mult(self, x: Sequence) -> Matrix:
        """Matrix of a |-> x * a."""
        f = self.field
        z, add, mul = f.zero, f.add, f.mul
        rows = [[z] * self.dim for _ in range(self.dim)]
        for i, xi in enumerate(x):
            if xi == z:
                continue
            ti = self._triples[i]
            for j in range(self.dim):
                for k, v in ti[j]:
                    rows[k][j] = add(rows[k][j], mul(xi, v))
        return Matrix(f, rows, coerce=False)

    def right_mult(self, x: Sequence) -> Matrix:
        """Matrix of a |-> a * x."""
        f = self.field
        z, add, mul = f.zero, f.add, f.mul
        rows = [[z] * self.dim for _ in range(self.dim)]
        for j, xj in enumerate(x):
            if xj == z:
                continue
            for i in range(self.dim):
                for k, v in self._triples[i][j]:
                    rows[k][i] = add(rows[k][i], mul(xj, v))
        return Matrix(f, rows, coerce=False)

    def basis_vec(self, i: int) -> list:
        return unit_vec(self.field, self.dim, i)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.dim == other.dim
            and self.sc == other.sc
            and self.unit == other.unit
        )

    def __repr__(self):
        return f"Algebra(dim {self.dim} over {self.field!r})"


def validate_algebra(a: Algebra) -> ValidationReport:
    """Unit laws and associativity on all basis triples; reports the first failure."""
    f = a.field
    for i in range(a.dim):
        e = a.basis_vec(i)
        if a.mul(a.unit, e) != e:
            return ValidationReport(False, [f"unit * e_{i} != e_{i}"])
        if a.mul(e, a.unit) != e:
            return ValidationReport(False, [f"e_{i} * unit != e_{i}"])
    for i in range(a.dim):
        for j in range(a.dim):
            ij = a.sc[i][j]
            for k in range(a.dim):
                left = a.mul(ij, a.basis_vec(k))
                right = a.mul(a.basis_vec(i), a.sc[j][k])
                if left != right:
                    return ValidationReport(
                        False, [f"associativity fails at (e_{i}, e_{j}, e_{k})"]
                    )
    return ValidationReport(True)


class Subalgebra:
    """A subspace of an ambient algebra closed under its product.

    Carries the induced abstract Algebra on the canonical subspace basis and
    converts between ambient vectors and internal coordinates.
    """

    def __init__(self, ambient: Algebra, subspace: Subspace):
        self.ambient = ambient
        self.subspace = subspace
        f = ambient.field
        unit_coords = subspace.coords(ambient.unit)
        if unit_coords is None:
            raise ValidationError("subalgebra does not contain the unit")
        sc = []
        for u in subspace.basis:
            row = []
            for v in subspace.basis:
                prod = ambient.mul(u, v)
                coords = subspace.coords(prod)
                if coords is None:
                    raise ValidationError("subspace is not closed under the product")
                row.append(coords)
            sc.append(row)
        self.algebra = Algebra(f, sc, unit_coords)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def embed(self, coords: Sequence) -> list:
        return self.subspace.from_coords(coords)

    def restrict(self, ambient_vec: Sequence) -> Optional[list]:
        return self.subspace.coords(ambient_vec)

    def as_extension(self) -> "Extension":
        cols = [list(v) for v in self.subspace.basis]
        m = Matrix.from_cols(self.ambient.field, cols, nrows=self.ambient.dim)
        return Extension(self.algebra, self.ambient, m)

    def __repr__(self):
        return f"Subalgebra(dim {self.dim} of dim {self.ambient.dim})"


class Extension:
    """A unit-preserving algebra homomorphism base -> total.

    map_matrix has shape (total.dim, base.dim); column i is the image of the
    i-th base basis element.
    """

    def __init__(self, base: Algebra, total: Algebra, map_matrix: Matrix):
        if base.field != total.field or map_matrix.field != base.field:
            raise FieldMismatchError("extension pieces over different fields")
        if map_matrix.shape != (total.dim, base.dim):
            raise DimensionMismatchError(
                f"map matrix {map_matrix.shape}, expected {(total.dim, base.dim)}"
            )
        self.base = base
        self.total = total
        self.map_matrix = map_matrix
        self.field = base.field
        self._image = None
        self._centralizer = None
        self._tensor_squares = {}

    @classmethod
    def identity(cls, a: Algebra) -> "Extension":
        return cls(a, a, Matrix.identity(a.field, a.dim))

    def map_vec(self, bvec: Sequence) -> list:
        return self.map_matrix.apply(bvec)

    def base_image_vec(self, i: int) -> list:
        return self.map_matrix.col(i)

    @property
    def image(self) -> Subspace:
        if self._image is None:
            self._image = Subspace.from_vectors(
                self.field, self.total.dim, [self.map_matrix.col(i) for i in range(self.base.dim)]
            )
        return self._image

    def is_proper(self) -> bool:
        """Whether the base embeds (the map is injective)."""
        return self.image.dim == self.base.dim

    def centralizer(self) -> Subalgebra:
        """V_A(B) = {x in A : x b = b x for the image of every base element}."""
        if self._centralizer is None:
            a = self.total
            rows = []
            for i in range(self.base.dim):
                w = self.base_image_vec(i)
                diff = a.left_mult(w) - a.right_mult(w)
                rows.extend(diff.rows)
            sub = kernel(Matrix(self.field, rows, coerce=False))
            self._centralizer = Subalgebra(a, sub)
        return self._centralizer

    def tensor_square(self, dim_guard: int = DEFAULT_DIM_GUARD) -> "TensorSquare":
        if dim_guard not in self._tensor_squares:
            self._tensor_squares[dim_guard] = TensorSquare(self, dim_guard)
        return self._tensor_squares[dim_guard]

    def as_bimodule(self, left: str = "base", right: str = "total") -> "Bimodule":
        """The total algebra as a bimodule, each side acting through the map

        when the label is "base" and by multiplication when "total"."""
        a = self.total
        basis_ops_left = []
        alg_left = self.base if left == "base" else a
        for i in range(alg_left.dim):
            w = self.base_image_vec(i) if left == "base" else a.basis_vec(i)
            basis_ops_left.append(a.left_mult(w))
        basis_ops_right = []
        alg_right = self.base if right == "base" else a
        for i in range(alg_right.dim):
            w = self.base_image_vec(i) if right == "base" else a.basis_vec(i)
            basis_ops_right.append(a.right_mult(w))
        return Bimodule(alg_left, alg_right, a.dim, basis_ops_left, basis_ops_right)

    def dims(self) -> dict:
        return {"base": self.base.dim, "total": self.total.dim}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Extension)
            and self.base == other.base
            and self.total == other.total
            and self.map_matrix == other.map_matrix
        )

    def __repr__(self):
        return f"Extension({self.total!r} over base dim {self.base.dim})"


def validate_extension(ext: Extension) -> ValidationReport:
    b, a = ext.base, ext.total
    img_unit = ext.map_vec(b.unit)
    if img_unit != a.unit:
        return ValidationReport(False, ["map does not send unit to unit"])
    for i in range(b.dim):
        for j in range(b.dim):
            lhs = ext.map_vec(b.sc[i][j])
            rhs = a.mul(ext.base_image_vec(i), ext.base_image_vec(j))
            if lhs != rhs:
                return ValidationReport(False, [f"map not multiplicative at (b_{i}, b_{j})"])
    return ValidationReport(True)


def compose_extensions(inner: Extension, outer: Extension) -> Extension:
    """B -> C followed by C -> A, giving B -> A. Requires outer.base == inner.total."""
    if outer.base != inner.total:
        raise ValidationError("tower mismatch: outer base differs from inner total")
    return Extension(inner.base, outer.total, outer.map_matrix @ inner.map_matrix)


def subalgebra_from_vectors(a: Algebra, vectors: Sequence[Sequence]) -> Subalgebra:
    return Subalgebra(a, Subspace.from_vectors(a.field, a.dim, vectors))


def center(a: Algebra) -> Subalgebra:
    return Extension.identity(a).centralizer()


class Bimodule:
    """A finite-dimensional (left algebra, right algebra)-bimodule.

    left_ops[i] is the matrix of the i-th left-algebra basis element acting on
    the carrier; right_ops likewise for the right algebra.
    """

    __slots__ = ("left", "right", "dim", "left_ops", "right_ops")

    def __init__(self, left: Algebra, right: Algebra, dim: int, left_ops: List[Matrix], right_ops: List[Matrix]):
        if left.field != right.field:
            raise FieldMismatchError("bimodule algebras over different fields")
        self.left = left
        self.right = right
        self.dim = dim
        self.left_ops = left_ops
        self.right_ops = right_ops

    @property
    def field(self):
        return self.left.field

    def left_act(self, xcoords: Sequence, m: Sequence) -> list:
        f = self.field
        out = zero_vec(f, self.dim)
        for i, c in enumerate(xcoords):
            if c != f.zero:
                out = [f.add(u, f.mul(c, v)) for u, v in zip(out, self.left_ops[i].apply(m))]
        return out

    def right_act(self, m: Sequence, xcoords: Sequence) -> list:
        f = self.field
        out = zero_vec(f, self.dim)
        for i, c in enumerate(xcoords):
            if c != f.zero:
                out = [f.add(u, f.mul(c, v)) for u, v in zip(out, self.right_ops[i].apply(m))]
        return out

    def __repr__(self):
        return f"Bimodule(dim {self.dim}; {self.left.dim} acting left, {self.right.dim} right)"


def validate_bimodule(m: Bimodule) -> ValidationReport:
    f = m.field
    ident = Matrix.identity(f, m.dim)

    def combo(ops, coeffs):
        out = Matrix.zeros(f, m.dim, m.dim)
        for c, op in zip(coeffs, ops):
            if c != f.zero:
                out = out + op.scale(c)
        return out

    if combo(m.left_ops, m.left.unit) != ident:
        return ValidationReport(False, ["left unit does not act as identity"])
    if combo(m.right_ops, m.right.unit) != ident:
        return ValidationReport(False, ["right unit does not act as identity"])
    for i in range(m.left.dim):
        for j in range(m.left.dim):
            if m.left_ops[i] @ m.left_ops[j] != combo(m.left_ops, m.left.sc[i][j]):
                return ValidationReport(False, [f"left action not multiplicative at ({i}, {j})"])
    for i in range(m.right.dim):
        for j in range(m.right.dim):
            # m . (x y) acts as right_op(y) . right_op(x) applied in order
            if m.right_ops[j] @ m.right_ops[i] != combo(m.right_ops, m.right.sc[i][j]):
                return ValidationReport(False, [f"right action not antimultiplicative at ({i}, {j})"])
    for i in range(m.left.dim):
        for j in range(m.right.dim):
            if m.left_ops[i] @ m.right_ops[j] != m.right_ops[j] @ m.left_ops[i]:
                return ValidationReport(False, [f"actions do not commute at ({i}, {j})"])
    return ValidationReport(True)


def regular_bimodule(a: Algebra) -> Bimodule:
    ops_l = [a.left_mult(a.basis_vec(i)) for i in range(a.dim)]
    ops_r = [a.right_mult(a.basis_vec(i)) for i in range(a.dim)]
    return Bimodule(a, a, a.dim, ops_l, ops_r)


def left_module(alg: Algebra, dim: int, ops: List[Matrix]) -> Bimodule:
    """A left module presented as a bimodule with trivial right K-action."""
    g = Algebra.ground(alg.field)
    return Bimodule(alg, g, dim, ops, [Matrix.identity(alg.field, dim)])


def right_module(alg: Algebra, dim: int, ops: List[Matrix]) -> Bimodule:
    g = Algebra.ground(alg.field)
    return Bimodule(g, alg, dim, [Matrix.identity(alg.field, dim)], ops)


class TensorSquare:
    """A (x)_B A for an extension, as a quotient of A (x) A.

    Ambient coordinates index pairs (i, j) at i * dim_A + j; the relations are
    (a b) (x) c - a (x) (b c) over all basis a, c of A and basis b of B. The
    canonical projection/section come from the relation RREF, and the three
    bimodule structures plus the multiplication map mu all act through them.
    """

    def __init__(self, ext: Extension, dim_guard: int = DEFAULT_DIM_GUARD):
        a, b = ext.total, ext.base
        f = ext.field
        dA = a.dim
        ambient = dA * dA
        if ambient > dim_guard:
            raise DimensionGuardError(
                f"tensor square ambient dimension {ambient} exceeds guard {dim_guard}"
            )
        self.extension = ext
        self.ambient = ambient
        z = f.zero
        rels = []
        for bi in range(b.dim):
            w = ext.base_image_vec(bi)
            for i in range(dA):
                u = a.mul(a.basis_vec(i), w)  # e_i * b
                for j in range(dA):
                    v = a.mul(w, a.basis_vec(j))  # b * e_j
                    rel = [z] * ambient
                    for k, x in enumerate(u):
                        if x != z:
                            rel[k * dA + j] = x
                    for l, x in enumerate(v):
                        if x != z:
                            rel[i * dA + l] = f.sub(rel[i * dA + l], x)
                    rels.append(rel)
        self.quotient = Quotient(f, ambient, rels)
        self._ops = {}
        self._mu = None
        self._one_one = None

    @property
    def field(self):
        return self.extension.field

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def project_pair(self, x: Sequence, y: Sequence) -> list:
        """Quotient coordinates of x (x) y."""
        return self.quotient.project(tensor_vec(self.field, x, y))

    @property
    def one_one(self) -> list:
        if self._one_one is None:
            u = self.extension.total.unit
            self._one_one = self.project_pair(u, u)
        return self._one_one

    @property
    def mu(self) -> Matrix:
        """Multiplication A (x)_B A -> A, well defined over the base."""
        if self._mu is None:
            a = self.extension.total
            dA = a.dim
            cols = []
            for c in self.quotient.free_cols:
                i, j = divmod(c, dA)
                cols.append(a.mul(a.basis_vec(i), a.basis_vec(j)))
            self._mu = Matrix.from_cols(self.field, cols, nrows=dA)
        return self._mu

    def _op(self, kind: str, i: int) -> Matrix:
        key = (kind, i)
        if key not in self._ops:
            ext = self.extension
            a = ext.total
            dA = a.dim
            ident = Matrix.identity(self.field, dA)
            if kind == "lt":  # x . (u (x) v) = (x u) (x) v, x a total basis element
                m = a.left_mult(a.basis_vec(i)).kron(ident)
            elif kind == "rt":  # (u (x) v) . x = u (x) (v x)
                m = ident.kron(a.right_mult(a.basis_vec(i)))
            elif kind == "lb":  # base acting on the left through the map
                m = a.left_mult(ext.base_image_vec(i)).kron(ident)
            elif kind == "rb":
                m = ident.kron(a.right_mult(ext.base_image_vec(i)))
            else:
                raise ValueError(kind)
            self._ops[key] = self.quotient.proj_matrix @ m @ self.quotient.sect_matrix
        return self._ops[key]

    def left_total_op(self, i: int) -> Matrix:
        return self._op("lt", i)

    def right_total_op(self, i: int) -> Matrix:
        return self._op("rt", i)

    def left_base_op(self, i: int) -> Matrix:
        return self._op("lb", i)

    def right_base_op(self, i: int) -> Matrix:
        return self._op("rb", i)

    def left_action(self, x: Sequence) -> Matrix:
        """The quotient matrix of x . (u (x) v) for an arbitrary x in A."""
        f = self.field
        out = Matrix.zeros(f, self.dim, self.dim)
        for i, c in enumerate(x):
            if c != f.zero:
                out = out + self.left_total_op(i).scale(c)
        return out

    def right_action(self, x: Sequence) -> Matrix:
        f = self.field
        out = Matrix.zeros(f, self.dim, self.dim)
        for i, c in enumerate(x):
            if c != f.zero:
                out = out + self.right_total_op(i).scale(c)
        return out

    def bimodule(self, left: str = "base", right: str = "total") -> Bimodule:
        ext = self.extension
        if left == "base":
            lops = [self.left_base_op(i) for i in range(ext.base.dim)]
            lalg = ext.base
        else:
            lops = [self.left_total_op(i) for i in range(ext.total.dim)]
            lalg = ext.total
        if right == "base":
            rops = [self.right_base_op(i) for i in range(ext.base.dim)]
            ralg = ext.base
        else:
            rops = [self.right_total_op(i) for i in range(ext.total.dim)]
            ralg = ext.total
        return Bimodule(lalg, ralg, self.dim, lops, rops)

    def __repr__(self):
        return f"TensorSquare(dim {self.dim}, ambient {self.ambient})"


def tensor_square(ext: Extension, dim_guard: int = DEFAULT_DIM_GUARD) -> TensorSquare:
    return ext.tensor_square(dim_guard)


def central_elements(ts: TensorSquare) -> Subspace:
    """(A (x)_B A)^B: elements with b . t = t . b for every base element."""
    rows = []
    for i in range(ts.extension.base.dim):
        diff = ts.left_base_op(i) - ts.right_base_op(i)
        rows.extend(diff.rows)
    if not rows:
        return Subspace.from_vectors(ts.field, ts.dim, [unit_vec(ts.field, ts.dim, k) for k in range(ts.dim)])
    return kernel(Matrix(ts.field, rows, coerce=False))


def casimir_elements(ts: TensorSquare) -> Subspace:
    """(A (x)_B A)^A: elements with a . t = t . a for every total element."""
    rows = []
    for i in range(ts.extension.total.dim):
        diff = ts.left_total_op(i) - ts.right_total_op(i)
        rows.extend(diff.rows)
    return kernel(Matrix(ts.field, rows, coerce=False))


# ---------------------------------------------------------------------------
# hom spaces and the summand test


def intertwiner_space(field, pairs: Sequence[Tuple[Matrix, Matrix]], dim_src: int, dim_tgt: int) -> List[Matrix]:
    """All X with X @ P = Q @ X for every (P, Q) pair, as a canonical basis.

    X has shape (dim_tgt, dim_src) and is flattened row-major; the stacked
    constraint system is eliminated sparsely in one pass.
    """
    z = field.zero
    nunk = dim_src * dim_tgt
    rows: List[dict] = []
    for P, Q in pairs:
        pcols = [[(k, P.rows[k][m]) for k in range(dim_src) if P.rows[k][m] != z] for m in range(dim_src)]
        qrows = [[(k, Q.rows[n][k]) for k in range(dim_tgt) if Q.rows[n][k] != z] for n in range(dim_tgt)]
        for n in range(dim_tgt):
            qr = qrows[n]
            base_n = n * dim_src
            for m in range(dim_src):
                row: dict = {}
                for k, val in pcols[m]:
                    idx = base_n + k
                    row[idx] = field.add(row.get(idx, z), val)
                for k, val in qr:
                    idx = k * dim_src + m
                    row[idx] = field.sub(row.get(idx, z), val)
                row = {c: x for c, x in row.items() if x != z}
                if row:
                    rows.append(row)
    reduced = _rref_sparse(rows, nunk, field)
    pivot_set = {c for c, _ in reduced}
    free = [c for c in range(nunk) if c not in pivot_set]
    vecs = []
    for fcol in free:
        v = [z] * nunk
        v[fcol] = field.one
        for c, row in reduced:
            x = row.get(fcol)
            if x is not None:
                v[c] = field.neg(x)
        vecs.append(v)
    sub = Subspace.from_vectors(field, nunk, vecs)
    return [Matrix.unvec(field, v, dim_tgt, dim_src) for v in sub.basis]


class HomSpace:
    """Basis of bimodule homomorphisms source -> target with coordinates."""

    def __init__(self, source: Bimodule, target: Bimodule, basis: List[Matrix]):
        self.source = source
        self.target = target
        self.basis = basis
        self.subspace = Subspace.from_vectors(
            source.field, source.dim * target.dim, [m.vec() for m in basis]
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, m: Matrix) -> Optional[list]:
        return self.subspace.coords(m.vec())

    def __repr__(self):
        return f"HomSpace(dim {self.dim})"


def bimodule_hom_space(m: Bimodule, n: Bimodule) -> HomSpace:
    """Hom over both actions: F with F(x . v . y) = x . F(v) . y."""
    if m.field != n.field:
        raise FieldMismatchError("hom space over mixed fields")
    if m.left != n.left or m.right != n.right:
        raise ValidationError("hom space requires identical acting algebras")
    pairs = list(zip(m.left_ops, n.left_ops)) + list(zip(m.right_ops, n.right_ops))
    basis = intertwiner_space(m.field, pairs, m.dim, n.dim)
    return HomSpace(m, n, basis)


def end_algebra_of(hom: HomSpace) -> Algebra:
    """Composition algebra of an endo hom space (source == target)."""
    if hom.source.dim != hom.target.dim:
        raise ValidationError("end algebra needs an endo hom space")
    f = hom.source.field
    sc = []
    for a in hom.basis:
        row = []
        for b in hom.basis:
            coords = hom.coords(a @ b)
            if coords is None:
                raise ValidationError("hom space not closed under composition")
            row.append(coords)
        sc.append(row)
    ident = Matrix.identity(f, hom.source.dim)
    unit = hom.coords(ident)
    if unit is None:
        raise ValidationError("identity missing from endo hom space")
    return Algebra(f, sc, unit)


class EndData:
    """S = End of A as a B-B-bimodule, as an algebra and an R-R-bimodule.

    The actions are (r . alpha)(x) = r alpha(x) and (alpha . r)(x) = alpha(x) r
    for r in the centralizer R, stored as matrices on hom-space coordinates.
    """

    def __init__(self, ext: Extension):
        a = ext.total
        f = ext.field
        bim = ext.as_bimodule("base", "base")
        self.extension = ext
        self.hom = bimodule_hom_space(bim, bim)
        self.algebra = end_algebra_of(self.hom)
        self.R = ext.centralizer()
        self.left_r_ops: List[Matrix] = []
        self.right_r_ops: List[Matrix] = []
        for rv in self.R.subspace.basis:
            lam, rho = a.left_mult(rv), a.right_mult(rv)
            lcols, rcols = [], []
            for al in self.hom.basis:
                lc = self.hom.coords(lam @ al)
                rc = self.hom.coords(rho @ al)
                if lc is None or rc is None:
                    raise ValidationError("centralizer action leaves the hom space")
                lcols.append(lc)
                rcols.append(rc)
            self.left_r_ops.append(Matrix.from_cols(f, lcols, nrows=self.hom.dim))
            self.right_r_ops.append(Matrix.from_cols(f, rcols, nrows=self.hom.dim))

    @property
    def dim(self) -> int:
        return self.hom.dim

    def as_left_r_module(self) -> Bimodule:
        return left_module(self.R.algebra, self.dim, self.left_r_ops)

    def as_right_r_module(self) -> Bimodule:
        return right_module(self.R.algebra, self.dim, self.right_r_ops)

    def as_r_bimodule(self) -> Bimodule:
        return Bimodule(self.R.algebra, self.R.algebra, self.dim, self.left_r_ops, self.right_r_ops)


def end_bimodule_algebra(ext: Extension) -> EndData:
    """End of A as a B-B-bimodule with composition product and R-R-actions."""
    return EndData(ext)


@dataclass
class RefusalWitness:
    """Auditable evidence that a summand/membership question fails.

    For summand refusals: the span of composites g . f misses the identity;
    dual_functional vanishes on the whole span yet takes value 1 on id.
    """

    kind: str
    span_dim: int
    end_dim: int
    codim: int
    dual_functional: Optional[list] = None
    detail: str = ""


@dataclass
class SummandCertificate:
    """Maps with sum(maps_in[i] . maps_out[i]) = id exactly."""

    maps_out: List[Matrix]
    maps_in: List[Matrix]
    n: int

    def verify(self, m: Bimodule, p: Bimodule) -> bool:
        f = m.field
        total = Matrix.zeros(f, m.dim, m.dim)
        for fo, gi in zip(self.maps_out, self.maps_in):
            total = total + gi @ fo
        if total != Matrix.identity(f, m.dim):
            return False
        pairs_mp = list(zip(m.left_ops, p.left_ops)) + list(zip(m.right_ops, p.right_ops))
        for fo in self.maps_out:
            for P, Q in pairs_mp:
                if fo @ P != Q @ fo:
                    return False
        pairs_pm = list(zip(p.left_ops, m.left_ops)) + list(zip(p.right_ops, m.right_ops))
        for gi in self.maps_in:
            for P, Q in pairs_pm:
                if gi @ P != Q @ gi:
                    return False
        return True


def add_membership(m: Bimodule, p: Bimodule):
    """Decide whether M is a direct summand of P^N in the bimodule category.

    Returns a SummandCertificate on success, else a RefusalWitness carrying
    the composite span dimension, its codimension inside the bimodule
    endomorphism algebra of M, and a separating dual functional.
    """
    hom_mp = bimodule_hom_space(m, p)
    hom_pm = bimodule_hom_space(p, m)
    f = m.field
    composites = []
    index_pairs = []
    for i, fo in enumerate(hom_mp.basis):
        for j, gi in enumerate(hom_pm.basis):
            composites.append((gi @ fo).vec())
            index_pairs.append((i, j))
    ident = Matrix.identity(f, m.dim).vec()
    kind, payload = membership_certificate(f, composites, ident)
    if kind == "in_span":
        maps_out, maps_in = [], []
        for c, (i, j) in zip(payload, index_pairs):
            if c != f.zero:
                maps_out.append(hom_mp.basis[i].scale(c))
                maps_in.append(hom_pm.basis[j])
        cert = SummandCertificate(maps_out, maps_in, len(maps_out))
        if not cert.verify(m, p):
            raise ValidationError("internal: summand certificate failed verification")
        return cert
    end_mm = bimodule_hom_space(m, m)
    span = Subspace.from_vectors(f, m.dim * m.dim, composites)
    return RefusalWitness(
        kind="not_summand",
        span_dim=span.dim,
        end_dim=end_mm.dim,
        codim=end_mm.dim - span.dim,
        dual_functional=payload,
        detail="identity of M is outside the span of composites through P",
    )


def ideal_generated(a: Algebra, generators: Sequence[Sequence]) -> Subspace:
    """Two-sided ideal generated by the given elements, by closure iteration."""
    current = Subspace.from_vectors(a.field, a.dim, [list(g) for g in generators])
    while True:
        new_vecs = list(current.basis)
        for v in current.basis:
            for i in range(a.dim):
                e = a.basis_vec(i)
                new_vecs.append(a.mul(e, v))
                new_vecs.append(a.mul(v, e))
        bigger = Subspace.from_vectors(a.field, a.dim, new_vecs)
        if bigger.dim == current.dim:
            return current
        current = bigger


def is_two_sided_ideal(a: Algebra, sub: Subspace) -> bool:
    for v in sub.basis:
        for i in range(a.dim):
            e = a.basis_vec(i)
            if not sub.contains(a.mul(e, v)) or not sub.contains(a.mul(v, e)):
                return False
    return True
