"""Base-relative Hochschild cochains with values in the total algebra.

C^0 is Hom over both base actions from the base into A (isomorphic to the
centralizer R via evaluation at 1), and C^n is Hom_{B-B} of the n-fold
tensor power of A over B into A, so C^1 is End of A as a B-B-bimodule.

Sign convention, pinned by the delta^2 = 0 and Leibniz tests: the first
face enters positively, the last face carries (-1)^(n+1), and the inner
face collapsing slots i, i+1 carries (-1)^i.  Other texts order the faces
differently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .algebra import (
    Bimodule,
    DimensionGuardError,
    EndData,
    Extension,
    HomSpace,
    ValidationError,
    bimodule_hom_space,
    end_bimodule_algebra,
    regular_bimodule,
)
from .depth import QuasibaseCertificate
from .linalg import Matrix, Quotient, kernel, tensor_vec, unit_vec, vec_scale

DEFAULT_POWER_GUARD = 20000
DEFAULT_DEGREE_CAP = 3


def iterated_power(ext: Extension, n: int, dim_guard: int = DEFAULT_POWER_GUARD) -> Quotient:
    """A (x)_B ... (x)_B A with n factors, as a quotient of the n-fold ambient.

    Relations slide each base element across one pair of adjacent slots while
    every other slot runs over the full basis.
    """
    if n < 1:
        raise ValidationError("iterated power needs at least one factor")
    a, b = ext.total, ext.base
    f = ext.field
    d = a.dim
    ambient = d ** n
    if ambient > dim_guard:
        raise DimensionGuardError(
            f"iterated power ambient dimension {ambient} exceeds guard {dim_guard}"
        )
    rels = []
    z = f.zero
    rest_count = d ** (n - 2) if n >= 2 else 0
    for k in range(n - 1):
        hi = d ** (n - 1 - k)  # weight of slot k
        lo = hi // d           # weight of slot k + 1
        for bi in range(b.dim):
            w = ext.base_image_vec(bi)
            for p in range(d):
                u = a.mul(a.basis_vec(p), w)
                for q in range(d):
                    v = a.mul(w, a.basis_vec(q))
                    for rest in range(rest_count):
                        # rest encodes all slots other than k, k + 1
                        high, low = divmod(rest, lo)
                        base_idx = high * (hi * d) + low
                        rel = [z] * ambient
                        for i, x in enumerate(u):
                            if x != z:
                                rel[base_idx + i * hi + q * lo] = x
                        for j, x in enumerate(v):
                            if x != z:
                                idx = base_idx + p * hi + j * lo
                                rel[idx] = f.sub(rel[idx], x)
                        rels.append(rel)
    return Quotient(f, ambient, rels)


@dataclass
class CochainSpace:
    """Basis of degree-n cochains as matrices on the iterated power."""

    extension: Extension
    degree: int
    power: Optional[Quotient]  # None in degree 0, where the domain is the base
    hom: HomSpace

    @property
    def dim(self) -> int:
        return self.hom.dim

    @property
    def domain_dim(self) -> int:
        return self.power.dim if self.power is not None else self.extension.base.dim

    def coords(self, m: Matrix) -> list:
        c = self.hom.coords(m)
        if c is None:
            raise ValidationError("internal: map is not a relative cochain")
        return c

    def matrix(self, coords) -> Matrix:
        out = Matrix.zeros(self.extension.field, self.extension.total.dim, self.domain_dim)
        for c, m in zip(coords, self.hom.basis):
            if c != self.extension.field.zero:
                out = out + m.scale(c)
        return out


def cochain_space(ext: Extension, n: int, dim_guard: int = DEFAULT_POWER_GUARD) -> CochainSpace:
    a = ext.total
    f = ext.field
    target = ext.as_bimodule("base", "base")
    if n == 0:
        hom = bimodule_hom_space(regular_bimodule(ext.base), target)
        return CochainSpace(ext, 0, None, hom)
    power = iterated_power(ext, n, dim_guard)
    d = a.dim
    left_ops, right_ops = [], []
    lo_last = 1
    hi_first = d ** (n - 1)
    for bi in range(ext.base.dim):
        w = ext.base_image_vec(bi)
        lcols, rcols = [], []
        for t in range(power.dim):
            amb_idx = power.free_cols[t]
            first, rest = divmod(amb_idx, hi_first)
            lvec = [f.zero] * power.ambient
            for i, x in enumerate(a.mul(w, a.basis_vec(first))):
                if x != f.zero:
                    lvec[i * hi_first + rest] = x
            lcols.append(power.project(lvec))
            head, last = divmod(amb_idx, d)
            rvec = [f.zero] * power.ambient
            for j, x in enumerate(a.mul(a.basis_vec(last), w)):
                if x != f.zero:
                    rvec[head * d + j] = x
            rcols.append(power.project(rvec))
        left_ops.append(Matrix.from_cols(f, lcols, nrows=power.dim))
        right_ops.append(Matrix.from_cols(f, rcols, nrows=power.dim))
    source = Bimodule(ext.base, ext.base, power.dim, left_ops, right_ops)
    hom = bimodule_hom_space(source, target)
    return CochainSpace(ext, n, power, hom)


@dataclass
class Cochain:
    degree: int
    coords: list


class HochschildComplex:
    """Cochain spaces with coboundary and cup product up to a degree cap.

    The coboundary and cup formulas are evaluated on the canonical section
    of each iterated power and re-projected; the results are re-expressed in
    the canonical cochain bases, so equal cochains have equal coordinates.
    """

    def __init__(self, ext: Extension, cap: int = DEFAULT_DEGREE_CAP,
                 dim_guard: int = DEFAULT_POWER_GUARD):
        if cap < 1:
            raise ValidationError("degree cap must be at least 1")
        self.extension = ext
        self.cap = cap
        self.spaces = [cochain_space(ext, n, dim_guard) for n in range(cap + 1)]
        self._digit_cache = {}
        self.deltas = [self._delta_matrix(n) for n in range(cap)]

    # -- plumbing -----------------------------------------------------------

    def _digits(self, idx: int, n: int) -> tuple:
        key = (idx, n)
        got = self._digit_cache.get(key)
        if got is None:
            d = self.extension.total.dim
            out = []
            for _ in range(n):
                idx, r = divmod(idx, d)
                out.append(r)
            got = tuple(reversed(out))
            self._digit_cache[key] = got
        return got

    def _apply(self, n: int, f_mat: Matrix, slots: List[int]) -> list:
        """f on the projected basis tensor with the given slot indices."""
        d = self.extension.total.dim
        idx = 0
        for s in slots:
            idx = idx * d + s
        power = self.spaces[n].power
        return f_mat.apply(power.project(unit_vec(self.extension.field, power.ambient, idx)))

    def _apply_mixed(self, n: int, f_mat: Matrix, slots: List[int], pos: int, vec) -> list:
        """Same, with one slot holding a general vector instead of a basis index."""
        f = self.extension.field
        out = [f.zero] * self.extension.total.dim
        for j, c in enumerate(vec):
            if c == f.zero:
                continue
            piece = self._apply(n, f_mat, slots[:pos] + [j] + slots[pos + 1:])
            out = [f.add(u, f.mul(c, v)) for u, v in zip(out, piece)]
        return out

    def _value0(self, f_mat: Matrix) -> list:
        return f_mat.apply(self.extension.base.unit)

    def _degree0_matrix(self, value) -> Matrix:
        a = self.extension.total
        cols = [a.mul(self.extension.base_image_vec(j), value)
                for j in range(self.extension.base.dim)]
        return Matrix.from_cols(self.extension.field, cols, nrows=a.dim)

    def matrix_of(self, coch: Cochain) -> Matrix:
        return self.spaces[coch.degree].matrix(coch.coords)

    def cochain_of(self, n: int, mat: Matrix) -> Cochain:
        return Cochain(n, self.spaces[n].coords(mat))

    # -- coboundary ----------------------------------------------------------

    def _delta_of_matrix(self, n: int, f_mat: Matrix) -> Matrix:
        a = self.extension.total
        f = self.extension.field
        if n == 0:
            r = self._value0(f_mat)
            op = a.right_mult(r) - a.left_mult(r)  # a . r - r . a on columns
            cols = [op.col(self.spaces[1].power.free_cols[t])
                    for t in range(self.spaces[1].power.dim)]
            return Matrix.from_cols(f, cols, nrows=a.dim)
        power = self.spaces[n + 1].power
        cols = []
        for t in range(power.dim):
            slots = list(self._digits(power.free_cols[t], n + 1))
            acc = a.mul(a.basis_vec(slots[0]), self._apply(n, f_mat, slots[1:]))
            sign = f.one
            for i in range(1, n + 1):
                sign = f.neg(sign)
                prod = a.mul(a.basis_vec(slots[i - 1]), a.basis_vec(slots[i]))
                merged = slots[:i - 1] + [None] + slots[i + 1:]
                piece = self._apply_mixed(n, f_mat, merged, i - 1, prod)
                acc = [f.add(u, f.mul(sign, v)) for u, v in zip(acc, piece)]
            sign = f.neg(sign)
            last = a.mul(self._apply(n, f_mat, slots[:-1]), a.basis_vec(slots[-1]))
            acc = [f.add(u, f.mul(sign, v)) for u, v in zip(acc, last)]
            cols.append(acc)
        return Matrix.from_cols(f, cols, nrows=a.dim)

    def _delta_matrix(self, n: int) -> Matrix:
        src, tgt = self.spaces[n], self.spaces[n + 1]
        cols = [tgt.coords(self._delta_of_matrix(n, m)) for m in src.hom.basis]
        return Matrix.from_cols(self.extension.field, cols, nrows=tgt.dim)

    def delta(self, coch: Cochain) -> Cochain:
        if coch.degree + 1 > self.cap:
            raise ValidationError("degree cap exceeded")
        return Cochain(coch.degree + 1, self.deltas[coch.degree].apply(coch.coords))

    # -- cup product ---------------------------------------------------------

    def cup(self, fc: Cochain, gc: Cochain) -> Cochain:
        m, n = fc.degree, gc.degree
        if m + n > self.cap:
            raise ValidationError("degree cap exceeded")
        a = self.extension.total
        f = self.extension.field
        f_mat, g_mat = self.matrix_of(fc), self.matrix_of(gc)
        if m == 0 and n == 0:
            value = a.mul(self._value0(f_mat), self._value0(g_mat))
            return self.cochain_of(0, self._degree0_matrix(value))
        if m == 0:
            return self.cochain_of(n, a.left_mult(self._value0(f_mat)) @ g_mat)
        if n == 0:
            return self.cochain_of(m, a.right_mult(self._value0(g_mat)) @ f_mat)
        power = self.spaces[m + n].power
        cols = []
        for t in range(power.dim):
            slots = list(self._digits(power.free_cols[t], m + n))
            cols.append(a.mul(self._apply(m, f_mat, slots[:m]),
                              self._apply(n, g_mat, slots[m:])))
        return self.cochain_of(m + n, Matrix.from_cols(f, cols, nrows=a.dim))

    def unit_cochain(self) -> Cochain:
        return self.cochain_of(0, self._degree0_matrix(self.extension.total.unit))

    def degree_zero_cochain(self, value) -> Cochain:
        """The 0-cochain sending b to iota(b) . value, for value in V_A(B)."""
        return self.cochain_of(0, self._degree0_matrix(value))

    # -- summary -------------------------------------------------------------

    @property
    def dims(self) -> List[int]:
        return [sp.dim for sp in self.spaces]

    @property
    def delta_ranks(self) -> List[int]:
        return [d.shape[1] - kernel(d).dim for d in self.deltas]

    @property
    def cohomology_dims(self) -> List[int]:
        """H^n for n < cap; im delta_(n-1) sits inside ker delta_n by delta^2 = 0."""
        out = []
        for n in range(self.cap):
            nullity = kernel(self.deltas[n]).dim
            out.append(nullity - (self.delta_ranks[n - 1] if n >= 1 else 0))
        return out


def cochain_complex(ext: Extension, cap: int = DEFAULT_DEGREE_CAP,
                    dim_guard: int = DEFAULT_POWER_GUARD) -> HochschildComplex:
    return HochschildComplex(ext, cap, dim_guard)


# ---------------------------------------------------------------------------
# degree-one generation


def _s_power(endd: EndData, n: int) -> Quotient:
    """S (x)_R ... (x)_R S as a quotient of the n-fold hom-coordinate ambient."""
    f = endd.extension.field
    s = endd.dim
    ambient = s ** n
    rels = []
    z = f.zero
    rest_count = s ** (n - 2) if n >= 2 else 0
    for k in range(n - 1):
        hi = s ** (n - 1 - k)
        lo = hi // s
        for right_op, left_op in zip(endd.right_r_ops, endd.left_r_ops):
            for p in range(s):
                u = right_op.col(p)
                for q in range(s):
                    v = left_op.col(q)
                    for rest in range(rest_count):
                        high, low = divmod(rest, lo)
                        base_idx = high * (hi * s) + low
                        rel = [z] * ambient
                        for i, x in enumerate(u):
                            if x != z:
                                rel[base_idx + i * hi + q * lo] = x
                        for j, x in enumerate(v):
                            if x != z:
                                idx = base_idx + p * hi + j * lo
                                rel[idx] = f.sub(rel[idx], x)
                        rels.append(rel)
    return Quotient(f, ambient, rels)


@dataclass
class GenerationIso:
    """Cup from the n-fold tensor power of S over R onto degree-n cochains."""

    extension: Extension
    degree: int
    s_power: Quotient
    space: CochainSpace
    forward: Matrix
    inverse: Matrix
    composite_on_cochains_is_id: bool
    composite_on_tensors_is_id: bool

    @property
    def bijective(self) -> bool:
        return self.composite_on_cochains_is_id and self.composite_on_tensors_is_id


def _quasibase_terms(cert: QuasibaseCertificate, dim_guard: int):
    ts = cert.extension.tensor_square(dim_guard)
    f = cert.extension.field
    d = cert.extension.total.dim
    out = []
    for t in cert.tensors:
        amb = ts.quotient.section(t)
        terms = []
        for idx, c in enumerate(amb):
            if c != f.zero:
                p, q = divmod(idx, d)
                terms.append((p, q, c))
        out.append(terms)
    return out


def generation_isomorphism(ext: Extension, cert: QuasibaseCertificate, n: int,
                           complex_: Optional[HochschildComplex] = None,
                           dim_guard: int = DEFAULT_POWER_GUARD) -> GenerationIso:
    """Cup product from Sockets over R to cochains, inverted by quasibases.

    Forward sends a tensor of degree-one cochains to their iterated cup;
    the inverse peels one factor at a time through the right quasibases,
    f into sum_j gamma_j (x) u_j^1 f(u_j^2 (x) -).
    """
    if cert.side != "right":
        raise ValidationError("a right quasibase certificate is required")
    if cert.extension != ext:
        raise ValidationError("certificate is for a different extension")
    if n < 1:
        raise ValidationError("generation degree must be at least 1")
    if complex_ is None:
        complex_ = HochschildComplex(ext, cap=n, dim_guard=dim_guard)
    elif complex_.cap < n:
        raise ValidationError("supplied complex has a smaller degree cap")
    a = ext.total
    f = ext.field
    d = a.dim
    endd = end_bimodule_algebra(ext)
    s = endd.dim
    space = complex_.spaces[n]
    powers = [None, None] + [_s_power(endd, m) for m in range(2, n + 1)]
    u_terms = _quasibase_terms(cert, dim_guard)
    gammas = [endd.hom.coords(g) for g in cert.endos]
    if any(g is None for g in gammas):
        raise ValidationError("internal: quasibase endomorphism outside S")

    def s_coords(mat: Matrix) -> list:
        c = endd.hom.coords(mat)
        if c is None:
            raise ValidationError("internal: peeled map left S")
        return c

    def tuple_cup(indices) -> list:
        # cup of basis one-cochains, as cochain coordinates
        mats = [endd.hom.basis[p] for p in indices]
        if n == 1:
            return space.coords(mats[0])
        power = space.power
        cols = []
        for t in range(power.dim):
            slots = complex_._digits(power.free_cols[t], n)
            val = mats[0].col(slots[0])
            for mat, sl in zip(mats[1:], slots[1:]):
                val = a.mul(val, mat.col(sl))
            cols.append(val)
        return space.coords(Matrix.from_cols(f, cols, nrows=a.dim))

    # forward: S-power coordinates -> cochain coordinates
    if n == 1:
        fwd_cols = [space.coords(m) for m in endd.hom.basis]
        src_dim = s
    else:
        fwd_cols = []
        for t in range(powers[n].dim):
            indices = []
            idx = powers[n].free_cols[t]
            for _ in range(n):
                idx, r = divmod(idx, s)
                indices.append(r)
            fwd_cols.append(tuple_cup(tuple(reversed(indices))))
        src_dim = powers[n].dim
    forward = Matrix.from_cols(f, fwd_cols, nrows=space.dim)

    def embed_col(m: int, q: int, free_col: int) -> list:
        # Q_(m-1) basis vector prefixed with e_q, projected into Q_m
        power_m = complex_.spaces[m].power
        prev = complex_.spaces[m - 1].power
        return power_m.project(unit_vec(f, power_m.ambient, q * prev.ambient + free_col))

    def peel(m: int, f_mat: Matrix) -> list:
        """Coordinates of the inverse image in the m-fold S power."""
        if m == 1:
            return s_coords(f_mat)
        prev_power = complex_.spaces[m - 1].power
        acc = [f.zero] * (s ** m)
        for terms, gamma in zip(u_terms, gammas):
            cols = []
            for t in range(prev_power.dim):
                free_col = prev_power.free_cols[t]
                col = [f.zero] * d
                for p, q, c in terms:
                    val = f_mat.apply(embed_col(m, q, free_col))
                    piece = a.mul(vec_scale(f, c, a.basis_vec(p)), val)
                    col = [f.add(u, v) for u, v in zip(col, piece)]
                cols.append(col)
            h = Matrix.from_cols(f, cols, nrows=d)
            rec = peel(m - 1, h)
            lifted = rec if m - 1 == 1 else powers[m - 1].section(rec)
            piece = tensor_vec(f, gamma, lifted)
            acc = [f.add(u, v) for u, v in zip(acc, piece)]
        return powers[m].project(acc)

    inv_cols = [peel(n, mat) for mat in space.hom.basis]
    inverse = Matrix.from_cols(f, inv_cols, nrows=src_dim)
    left_id = forward @ inverse == Matrix.identity(f, space.dim)
    right_id = inverse @ forward == Matrix.identity(f, src_dim)
    return GenerationIso(ext, n, powers[n] if n >= 2 else None, space,
                         forward, inverse, left_id, right_id)


def inverse_degree_three(ext: Extension, cert: QuasibaseCertificate,
                         complex_: HochschildComplex,
                         dim_guard: int = DEFAULT_POWER_GUARD) -> Matrix:
    """The closed inverse in degree three, bypassing the recursion.

    g into sum_(i,j) gamma_j (x) gamma_i (x) u_i^1 u_j^1 g(u_j^2 (x) u_i^2 (x) -).
    """
    if cert.side != "right":
        raise ValidationError("a right quasibase certificate is required")
    if complex_.cap < 3:
        raise ValidationError("supplied complex has a smaller degree cap")
    a = ext.total
    f = ext.field
    d = a.dim
    endd = end_bimodule_algebra(ext)
    s = endd.dim
    space = complex_.spaces[3]
    power3 = space.power
    spow = _s_power(endd, 3)
    u_terms = _quasibase_terms(cert, dim_guard)
    gammas = [endd.hom.coords(g) for g in cert.endos]

    cols = []
    for g_mat in space.hom.basis:
        acc = [f.zero] * (s ** 3)
        for terms_j, gamma_j in zip(u_terms, gammas):
            for terms_i, gamma_i in zip(u_terms, gammas):
                mat_cols = []
                for x in range(d):
                    col = [f.zero] * d
                    for pj, qj, cj in terms_j:
                        for pi, qi, ci in terms_i:
                            amb_idx = (qj * d + qi) * d + x
                            val = g_mat.apply(power3.project(unit_vec(f, power3.ambient, amb_idx)))
                            head = a.mul(a.basis_vec(pi), a.basis_vec(pj))
                            piece = vec_scale(f, f.mul(ci, cj), a.mul(head, val))
                            col = [f.add(u, v) for u, v in zip(col, piece)]
                    mat_cols.append(col)
                inner = endd.hom.coords(Matrix.from_cols(f, mat_cols, nrows=d))
                if inner is None:
                    raise ValidationError("internal: peeled map left S")
                piece = tensor_vec(f, gamma_j, tensor_vec(f, gamma_i, inner))
                acc = [f.add(u, v) for u, v in zip(acc, piece)]
        cols.append(spow.project(acc))
    return Matrix.from_cols(f, cols, nrows=spow.dim)
