"""Exact dense linear algebra over Q and over prime fields F_p.

Scalars are plain values: fractions.Fraction over Q, ints in [0, p) over F_p.
A Field object supplies the arithmetic so matrices never mix scalar kinds.
Matrices are dense row-major lists; a linear map V -> W is stored with
columns as images, so apply() is the usual matrix-vector product and
composition f after g is ``Mf @ Mg``.

Row reduction runs on sparse dict rows internally (the structure constants
feeding these systems are mostly zero), but every public result is dense and
canonical: the reduced row echelon form of a matrix is unique, so bases,
kernels and particular solutions are deterministic by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple


class LinalgError(Exception):
    pass


class FieldMismatchError(LinalgError):
    """Raised when scalars or operands over different fields are combined."""


class DimensionMismatchError(LinalgError):
    """Raised on shape disagreements."""


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3 * 10^24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The rationals. Scalars are fractions.Fraction (canonical by

    construction: reduced, positive denominator)."""

    name = "q"
    characteristic = 0

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def coerce(x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise FieldMismatchError(f"cannot coerce {x!r} into Q")

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def fmt(a) -> str:
        return str(a)

    def to_json(self, a):
        if a.denominator == 1:
            return int(a)
        return f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("q")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """F_p for a verified prime p. Scalars are ints in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_probable_prime(p):
            raise FieldMismatchError(f"{p!r} is not prime")
        self.p = p
        self.name = f"fp:{p}"
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            if "/" in x:
                num, den = x.split("/", 1)
                return self.div(int(num) % self.p, int(den) % self.p)
            return int(x) % self.p
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        raise FieldMismatchError(f"cannot coerce {x!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    @staticmethod
    def fmt(a) -> str:
        return str(a)

    def to_json(self, a):
        return int(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def field_from_name(name: str):
    """Parse a field tag: "q" for the rationals, "fp:<p>" for F_p."""
    if name == "q":
        return QQ
    if name.startswith("fp:"):
        return PrimeField(int(name[3:]))
    raise FieldMismatchError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# vectors: plain lists of field scalars


def zero_vec(field, n: int) -> list:
    return [field.zero] * n


def unit_vec(field, n: int, i: int) -> list:
    v = [field.zero] * n
    v[i] = field.one
    return v


def vec_add(field, u, v):
    return [field.add(a, b) for a, b in zip(u, v)]


def vec_sub(field, u, v):
    return [field.sub(a, b) for a, b in zip(u, v)]


def vec_scale(field, c, v):
    if c == field.zero:
        return [field.zero] * len(v)
    return [field.mul(c, a) for a in v]


def vec_dot(field, u, v):
    acc = field.zero
    for a, b in zip(u, v):
        if a != field.zero and b != field.zero:
            acc = field.add(acc, field.mul(a, b))
    return acc


def vec_is_zero(field, v) -> bool:
    z = field.zero
    return all(a == z for a in v)


def tensor_vec(field, u, v):
    """Coordinates of u (x) v, index (i, j) -> i * len(v) + j."""
    z = field.zero
    out = [z] * (len(u) * len(v))
    m = len(v)
    for i, a in enumerate(u):
        if a == z:
            continue
        base = i * m
        for j, b in enumerate(v):
            if b != z:
                out[base + j] = field.mul(a, b)
    return out


# ---------------------------------------------------------------------------
# sparse elimination core


def _to_sparse(rows: Sequence[Sequence], field) -> List[dict]:
    z = field.zero
    return [{j: x for j, x in enumerate(row) if x != z} for row in rows]


def _axpy(field, target: dict, factor, source: dict, occ, tid) -> None:
    # target -= factor * source, maintaining the column occupancy index
    sub, mul, z = field.sub, field.mul, field.zero
    for c, s in source.items():
        cur = target.get(c, z)
        val = sub(cur, mul(factor, s))
        if val == z:
            if c in target:
                del target[c]
                occ[c].discard(tid)
        else:
            if c not in target:
                occ.setdefault(c, set()).add(tid)
            target[c] = val


def _rref_sparse(rows: List[dict], ncols: int, field) -> List[Tuple[int, dict]]:
    """Reduce sparse dict rows in place to RREF.

    Returns [(pivot_col, row_dict), ...] ordered by pivot column. Pivot choice
    is leftmost column first, then lowest original row index, which yields the
    (unique) reduced echelon form deterministically.
    """
    occ: dict = {}
    for i, row in enumerate(rows):
        for c in row:
            occ.setdefault(c, set()).add(i)
    in_pivot = set()
    pivots: List[Tuple[int, int]] = []  # (col, row id)
    mul, inv, z = field.mul, field.inv, field.zero
    for c in range(ncols):
        ids = occ.get(c)
        if not ids:
            continue
        cand = [i for i in ids if i not in in_pivot]
        if not cand:
            continue
        pid = min(cand)
        prow = rows[pid]
        lead = prow[c]
        if lead != field.one:
            factor = inv(lead)
            for cc in list(prow):
                prow[cc] = mul(factor, prow[cc])
        for oid in list(ids):
            if oid == pid:
                continue
            _axpy(field, rows[oid], rows[oid][c], prow, occ, oid)
        in_pivot.add(pid)
        pivots.append((c, pid))
    return [(c, rows[pid]) for c, pid in pivots]


def _dense(row: dict, ncols: int, field) -> list:
    out = [field.zero] * ncols
    for c, x in row.items():
        out[c] = x
    return out


# ---------------------------------------------------------------------------


class Matrix:
    """Dense matrix over a fixed field; columns of a map are images of the

    source basis, so ``apply`` is M @ v and composition is ``@``."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows: Sequence[Sequence], coerce: bool = True):
        self.field = field
        if coerce:
            rows = [[field.coerce(x) for x in row] for row in rows]
        else:
            rows = [list(row) for row in rows]
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != self.ncols:
                raise DimensionMismatchError("ragged rows")

    # -- constructors

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)], coerce=False)

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], coerce=False)

    @classmethod
    def from_cols(cls, field, cols: Sequence[Sequence], nrows: Optional[int] = None) -> "Matrix":
        """Build the matrix whose j-th column is cols[j]."""
        if not cols:
            if nrows is None:
                raise DimensionMismatchError("from_cols needs nrows when cols is empty")
            return cls.zeros(field, nrows, 0)
        n = len(cols[0])
        return cls(field, [[col[i] for col in cols] for i in range(n)])

    # -- basic access

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def col(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def to_lists(self) -> list:
        return [list(row) for row in self.rows]

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatchError("mixed fields")

    # -- arithmetic

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatchError(f"matmul {self.shape} @ {other.shape}")
        f = self.field
        z, add, mul = f.zero, f.add, f.mul
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [z] * other.ncols
            for k, a in enumerate(row):
                if a == z:
                    continue
                orow = orows[k]
                for j, b in enumerate(orow):
                    if b != z:
                        acc[j] = add(acc[j], mul(a, b))
            out.append(acc)
        return Matrix(f, out, coerce=False)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.ncols:
            raise DimensionMismatchError("apply length")
        f = self.field
        z, add, mul = f.zero, f.add, f.mul
        out = [z] * self.nrows
        for i, row in enumerate(self.rows):
            acc = z
            for a, b in zip(row, v):
                if a != z and b != z:
                    acc = add(acc, mul(a, b))
            out[i] = acc
        return out

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatchError("add shapes")
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], coerce=False)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatchError("sub shapes")
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], coerce=False)

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.rows], coerce=False)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.rows], coerce=False)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(col) for col in zip(*self.rows)] if self.rows else [], coerce=False)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product, row index (i, k) -> i * other.nrows + k."""
        self._check(other)
        f = self.field
        z, mul = f.zero, f.mul
        out = []
        for arow in self.rows:
            for brow in other.rows:
                row = []
                for a in arow:
                    if a == z:
                        row.extend([z] * len(brow))
                    else:
                        row.extend(mul(a, b) if b != z else z for b in brow)
                out.append(row)
        return Matrix(f, out, coerce=False)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for row in self.rows for a in row)

    def vec(self) -> list:
        """Row-major flattening, entry (i, j) at i * ncols + j."""
        return [a for row in self.rows for a in row]

    @classmethod
    def unvec(cls, field, v: Sequence, nrows: int, ncols: int) -> "Matrix":
        if len(v) != nrows * ncols:
            raise DimensionMismatchError("unvec length")
        return cls(field, [list(v[i * ncols:(i + 1) * ncols]) for i in range(nrows)], coerce=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field!r})"


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns (canonical, zero rows dropped)."""
    reduced = _rref_sparse(_to_sparse(m.rows, m.field), m.ncols, m.field)
    rows = [_dense(row, m.ncols, m.field) for _, row in reduced]
    return Matrix(m.field, rows, coerce=False), [c for c, _ in reduced]


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel(m: Matrix) -> "Subspace":
    """Canonical basis of the right null space {v : M v = 0}."""
    reduced = _rref_sparse(_to_sparse(m.rows, m.field), m.ncols, m.field)
    field = m.field
    pivot_cols = [c for c, _ in reduced]
    pivot_set = set(pivot_cols)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    vecs = []
    for fcol in free:
        v = [field.zero] * m.ncols
        v[fcol] = field.one
        for c, row in reduced:
            x = row.get(fcol)
            if x is not None:
                v[c] = field.neg(x)
        vecs.append(v)
    return Subspace.from_vectors(field, m.ncols, vecs)


def solve_linear(m: Matrix, rhs: Sequence) -> Optional[list]:
    """One exact solution of M x = rhs (free variables zero), or None."""
    if len(rhs) != m.nrows:
        raise DimensionMismatchError("rhs length")
    field = m.field
    z = field.zero
    aug = _to_sparse(m.rows, field)
    for i, b in enumerate(rhs):
        b = field.coerce(b)
        if b != z:
            aug[i][m.ncols] = b
    reduced = _rref_sparse(aug, m.ncols + 1, field)
    x = [z] * m.ncols
    for c, row in reduced:
        if c == m.ncols:
            return None
        x[c] = row.get(m.ncols, z)
    return x


def solve_membership(field, vectors: Sequence[Sequence], target: Sequence) -> Optional[list]:
    """Coefficients expressing target in the span of vectors, or None.

    The particular solution is canonical: it comes from the unique RREF of the
    column-stacked system with free coefficients set to zero.
    """
    n = len(target)
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatchError("span vector length")
    cols = Matrix.from_cols(field, list(vectors), nrows=n) if vectors else Matrix.zeros(field, n, 0)
    return solve_linear(cols, list(target))


def membership_certificate(field, vectors: Sequence[Sequence], target: Sequence):
    """Decide target in span(vectors) with an auditable artifact either way.

    Returns ("in_span", coeffs) with target == sum coeffs[i] * vectors[i], or
    ("not_in_span", y) where y is a functional with y . v = 0 for every v in
    vectors and y . target = 1.
    """
    coeffs = solve_membership(field, vectors, target)
    if coeffs is not None:
        return ("in_span", coeffs)
    stacked = Matrix(field, [list(v) for v in vectors] + [list(target)])
    rhs = [field.zero] * len(vectors) + [field.one]
    y = solve_linear(stacked, rhs)
    if y is None:  # unreachable when membership genuinely fails
        raise LinalgError("inconsistent membership refusal")
    return ("not_in_span", y)


class Subspace:
    """Subspace of K^n held as a canonical RREF basis (rows)."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient: int, basis: List[list], pivots: List[int]):
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_vectors(cls, field, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise DimensionMismatchError("ambient mismatch")
        reduced = _rref_sparse(_to_sparse(vecs, field), ambient, field)
        return cls(field, ambient, [_dense(r, ambient, field) for _, r in reduced], [c for c, _ in reduced])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence) -> list:
        """Canonical residual of v modulo the subspace."""
        field = self.field
        z = field.zero
        w = [field.coerce(x) for x in v]
        for p, row in zip(self.pivots, self.basis):
            c = w[p]
            if c != z:
                w = [field.sub(a, field.mul(c, b)) for a, b in zip(w, row)]
        return w

    def contains(self, v: Sequence) -> bool:
        return vec_is_zero(self.field, self.reduce(v))

    def coords(self, v: Sequence) -> Optional[list]:
        """Coefficients of v in the canonical basis, or None if outside."""
        field = self.field
        z = field.zero
        w = [field.coerce(x) for x in v]
        cs = []
        for p, row in zip(self.pivots, self.basis):
            c = w[p]
            cs.append(c)
            if c != z:
                w = [field.sub(a, field.mul(c, b)) for a, b in zip(w, row)]
        if not vec_is_zero(field, w):
            return None
        return cs

    def from_coords(self, cs: Sequence) -> list:
        v = [self.field.zero] * self.ambient
        for c, row in zip(cs, self.basis):
            if c != self.field.zero:
                v = vec_add(self.field, v, vec_scale(self.field, c, row))
        return v

    def sum(self, other: "Subspace") -> "Subspace":
        self._compat(other)
        return Subspace.from_vectors(self.field, self.ambient, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._compat(other)
        # x in both spans: x = U a = W b, kernel of [U | -W] columns
        cols = [list(v) for v in self.basis] + [vec_scale(self.field, self.field.neg(self.field.one), v) for v in other.basis]
        if not cols:
            return Subspace.from_vectors(self.field, self.ambient, [])
        m = Matrix.from_cols(self.field, cols, nrows=self.ambient)
        ker = kernel(m)
        vecs = []
        for kv in ker.basis:
            a = kv[: self.dim]
            vecs.append(self.from_coords(a))
        return Subspace.from_vectors(self.field, self.ambient, vecs)

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._compat(other)
        return all(other.contains(v) for v in self.basis)

    def _compat(self, other: "Subspace"):
        if self.field != other.field:
            raise FieldMismatchError("mixed fields")
        if self.ambient != other.ambient:
            raise DimensionMismatchError("ambient mismatch")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Subspace(dim {self.dim} of K^{self.ambient})"


class Quotient:
    """K^n modulo the span of relation vectors, with canonical section.

    Quotient coordinates live on the non-pivot (free) columns of the relation
    RREF; the section lifts coordinate k to the ambient unit vector at the
    k-th free column, and project . section is the identity.
    """

    __slots__ = ("field", "ambient", "relations", "free_cols", "_proj", "_sect")

    def __init__(self, field, ambient: int, relation_vectors: Iterable[Sequence]):
        self.field = field
        self.ambient = ambient
        self.relations = Subspace.from_vectors(field, ambient, relation_vectors)
        pivot_set = set(self.relations.pivots)
        self.free_cols = [c for c in range(ambient) if c not in pivot_set]
        self._proj = None
        self._sect = None

    @property
    def dim(self) -> int:
        return len(self.free_cols)

    def project(self, v: Sequence) -> list:
        w = self.relations.reduce(v)
        return [w[c] for c in self.free_cols]

    def section(self, q: Sequence) -> list:
        """Canonical ambient representative of quotient coordinates q."""
        if len(q) != self.dim:
            raise DimensionMismatchError("quotient coords length")
        v = [self.field.zero] * self.ambient
        for c, x in zip(self.free_cols, q):
            v[c] = self.field.coerce(x)
        return v

    @property
    def proj_matrix(self) -> Matrix:
        if self._proj is None:
            field = self.field
            z = field.zero
            free_index = {c: k for k, c in enumerate(self.free_cols)}
            cols = []
            for j in range(self.ambient):
                col = [z] * self.dim
                if j in free_index:
                    col[free_index[j]] = field.one
                else:
                    i = self.relations.pivots.index(j)
                    row = self.relations.basis[i]
                    for c, k in free_index.items():
                        x = row[c]
                        if x != z:
                            col[k] = field.neg(x)
                cols.append(col)
            self._proj = Matrix.from_cols(field, cols, nrows=self.dim)
        return self._proj

    @property
    def sect_matrix(self) -> Matrix:
        if self._sect is None:
            field = self.field
            cols = [unit_vec(field, self.ambient, c) for c in self.free_cols]
            self._sect = Matrix.from_cols(field, cols, nrows=self.ambient)
        return self._sect

    def __repr__(self):
        return f"Quotient(K^{self.ambient} -> dim {self.dim})"
