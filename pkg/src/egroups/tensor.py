"""Alternating 3-tensors, their centroid/adjoint algebras, and isotropy.

A TensorHandle stores an alternating bilinear map GF(p)^n x GF(p)^n ->
GF(p)^d by its d skew-symmetric structure matrices.  The adjoint of a
matrix of linear forms B is frozen in the orientation

    (X, Y) in Adj(B)  <=>  X^T B(y) = B(y) Y   slicewise,

with star the coordinate swap (X, Y) -> (Y, X) and product
(X1, Y1)(X2, Y2) = (X1 X2, Y2 Y1).
"""

from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, TooLarge
from .fields import FieldSpec, field_make
from .forms import LinearFormMatrix
from .linalg import (ExactMatrix, inverse, kernel_basis, mat_mul, rank, rref,
                     solve)
from .poly import UniPoly
from .rng import SplitMix64


class TensorHandle:
    """Alternating tensor over a prime field, given by skew slices."""

    __slots__ = ("field", "dim_v", "dim_t", "forms")

    def __init__(self, field: FieldSpec, forms):
        arr = np.asarray(forms, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError("forms must have shape (d, n, n)")
        if field.e != 1:
            raise ValueError("TensorHandle is a prime-field object")
        self.field = field
        self.dim_t = arr.shape[0]
        self.dim_v = arr.shape[1]
        self.forms = arr % field.p

    def is_alternating(self):
        for k in range(self.dim_t):
            s = self.forms[k]
            if ((s + s.T) % self.field.p).any() or s.diagonal().any():
                return False
        return True

    def radical_is_trivial(self):
        stacked = ExactMatrix(self.field, self.forms.reshape(-1, self.dim_v))
        return rank(stacked) == self.dim_v

    def is_full(self):
        flat = ExactMatrix(self.field, self.forms.reshape(self.dim_t, -1))
        return rank(flat) == self.dim_t

    def value(self, u, v):
        """t(u, v) as a length-d code vector."""
        F = self.field
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        return np.array([int((u @ self.forms[k] @ v) % F.p)
                         for k in range(self.dim_t)], dtype=np.int64)

    def __eq__(self, other):
        return (isinstance(other, TensorHandle) and self.field == other.field
                and self.forms.shape == other.forms.shape
                and bool((self.forms == other.forms).all()))

    def to_json(self):
        return {"p": self.field.p, "dim_v": int(self.dim_v),
                "dim_t": int(self.dim_t),
                "forms": [m.tolist() for m in self.forms]}

    @staticmethod
    def from_json(obj):
        F = field_make(obj["p"])
        return TensorHandle(F, np.array(obj["forms"], dtype=np.int64))


def verify_pseudo_isometry(s: TensorHandle, t: TensorHandle,
                           P_V: ExactMatrix, P_T: ExactMatrix) -> bool:
    """True iff P_V^T C_i^t P_V = sum_j (P_T)_{ij} C_j^s for all i.

    (P_V, P_T) is then a pseudo-isometry from s to t: the target tensor
    pulled back along P_V equals P_T applied to the source values.
    """
    if s.field != t.field:
        raise DimensionMismatch("tensors live over different prime fields")
    if (P_V.shape != (t.dim_v, s.dim_v) or P_T.shape != (t.dim_t, s.dim_t)
            or s.dim_v != t.dim_v or s.dim_t != t.dim_t):
        raise DimensionMismatch("pseudo-isometry shape mismatch")
    p = s.field.p
    pv = P_V.a
    for i in range(t.dim_t):
        lhs = (pv.T @ t.forms[i] @ pv) % p
        rhs = np.zeros_like(lhs)
        for j in range(s.dim_t):
            c = int(P_T.a[i, j])
            if c:
                rhs += c * s.forms[j]
        if ((lhs - rhs) % p).any():
            return False
    return True


# -- algebra bases -----------------------------------------------------------


class AlgebraBasis:
    """Subalgebra (or module) of pairs/triples of matrices, by basis.

    `kind` is "pair" for Adj-style (X, Y) elements and "triple" for
    Cent-style (X, Y, Z).  Pairs multiply in End x End^op:
    (X1,Y1)(X2,Y2) = (X1X2, Y2Y1); triples multiply componentwise.
    """

    def __init__(self, field, kind, elements, check_closure=False):
        self.field = field
        self.kind = kind
        self.elements = [tuple(np.asarray(m, dtype=np.int64) for m in el)
                         for el in elements]
        self._coord_mat = None
        if check_closure:
            self.verify_closure()

    @property
    def dim(self):
        return len(self.elements)

    def coords(self, el):
        return np.concatenate([m.reshape(-1) for m in el])

    def _coord_matrix(self):
        if self._coord_mat is None:
            rows = [self.coords(el) for el in self.elements]
            self._coord_mat = np.array(rows, dtype=np.int64)
        return self._coord_mat

    def member_coords(self, el):
        """Coordinates of el in the basis, or None."""
        if self.dim == 0:
            return None
        m = ExactMatrix(self.field, self._coord_matrix().T)
        return solve(m, self.coords(el))

    def contains(self, el):
        return self.member_coords(el) is not None

    def mul(self, e1, e2):
        F = self.field
        if self.kind == "pair":
            return (mat_mul(F, e1[0], e2[0]), mat_mul(F, e2[1], e1[1]))
        return tuple(mat_mul(F, a, b) for a, b in zip(e1, e2))

    def star(self, el):
        if self.kind != "pair":
            raise ValueError("star is defined for pair algebras")
        return (el[1].copy(), el[0].copy())

    def identity_element(self):
        n0 = self.elements[0][0].shape[0] if self.elements else 0
        if self.kind == "pair":
            n1 = self.elements[0][1].shape[0]
            return (np.eye(n0, dtype=np.int64), np.eye(n1, dtype=np.int64))
        return tuple(np.eye(m.shape[0], dtype=np.int64) for m in self.elements[0])

    def has_identity(self):
        return self.dim > 0 and self.contains(self.identity_element())

    def combo(self, coeffs):
        F = self.field
        parts = [np.zeros_like(m) for m in self.elements[0]]
        for c, el in zip(coeffs, self.elements):
            if c:
                for i, m in enumerate(el):
                    parts[i] = F.add(parts[i], F.mul(m, np.int64(int(c))))
        return tuple(parts)

    def verify_closure(self):
        for e1 in self.elements:
            for e2 in self.elements:
                if not self.contains(self.mul(e1, e2)):
                    raise AssertionError("basis is not closed under product")
        if self.kind == "pair":
            for el in self.elements:
                if not self.contains(self.star(el)):
                    raise AssertionError("basis is not closed under star")

    def is_commutative(self):
        for i, e1 in enumerate(self.elements):
            for e2 in self.elements[i + 1:]:
                a = self.mul(e1, e2)
                b = self.mul(e2, e1)
                if any((x != y).any() for x, y in zip(a, b)):
                    return False
        return True

    def min_poly(self, el, seed=0):
        """Minimal polynomial of el in the enveloping matrix algebra."""
        F = self.field
        power = self.identity_element()
        rows = [self.coords(power)]
        while True:
            power = self.mul(power, el)
            cand = self.coords(power)
            m = ExactMatrix(F, np.array(rows, dtype=np.int64).T)
            sol = solve(m, cand)
            if sol is not None:
                coeffs = [F.neg(int(c)) for c in sol] + [1]
                return UniPoly(F, coeffs)
            rows.append(cand)


# -- linear systems: centroid, adjoint, adjoint module -----------------------


def _left_mul_block(C, n):
    """Rows (i,j), cols (a,b): coefficient of X[a,b] in (X^T C)[i,j]."""
    eye = np.eye(n, dtype=np.int64)
    return np.einsum('aj,bi->ijab', C, eye).reshape(n * n, n * n)


def _right_mul_block(C, n):
    """Rows (i,j), cols (a,b): coefficient of Y[a,b] in (C Y)[i,j]."""
    eye = np.eye(n, dtype=np.int64)
    return np.einsum('ia,jb->ijab', C, eye).reshape(n * n, n * n)


def adjoint(B: LinearFormMatrix, check_closure=True) -> AlgebraBasis:
    """All (X, Y) with X^T B_k = B_k Y for every slice."""
    F = B.field
    n = B.n
    blocks = []
    for k in range(3):
        C = B.slices[k]
        m1 = _left_mul_block(C, n)
        m2 = _right_mul_block(C, n)
        blocks.append(np.hstack([m1, F.neg(m2)]))
    sysm = ExactMatrix(F, np.vstack(blocks))
    els = []
    for v in kernel_basis(sysm):
        X = v[: n * n].reshape(n, n)
        Y = v[n * n:].reshape(n, n)
        els.append((X, Y))
    return AlgebraBasis(F, "pair", els, check_closure=check_closure)


def adjoint_module(M: LinearFormMatrix, N: LinearFormMatrix):
    """Basis of {(A, B) : A^T N_k = M_k B for all slices}."""
    if M.field != N.field or M.n != N.n:
        raise DimensionMismatch("adjoint module needs matching shapes")
    F = M.field
    n = M.n
    blocks = []
    for k in range(3):
        m1 = _left_mul_block(N.slices[k], n)
        m2 = _right_mul_block(M.slices[k], n)
        blocks.append(np.hstack([m1, F.neg(m2)]))
    sysm = ExactMatrix(F, np.vstack(blocks))
    out = []
    for v in kernel_basis(sysm):
        out.append((v[: n * n].reshape(n, n), v[n * n:].reshape(n, n)))
    return out


def centroid(t: TensorHandle, check_closure=True) -> AlgebraBasis:
    """All (X, Y, Z) with X^T C_k = C_k Y = sum_l Z[k,l] C_l."""
    F = t.field
    n, d = t.dim_v, t.dim_t
    nn = n * n
    rows = []
    for k in range(d):
        C = t.forms[k]
        zcols_a = np.zeros((nn, d * d), dtype=np.int64)
        zcols_b = np.zeros((nn, d * d), dtype=np.int64)
        for l in range(d):
            col = k * d + l
            flat = F.neg(t.forms[l].reshape(-1))
            zcols_a[:, col] = flat
            zcols_b[:, col] = flat
        rows.append(np.hstack([_left_mul_block(C, n),
                               np.zeros((nn, nn), dtype=np.int64), zcols_a]))
        rows.append(np.hstack([np.zeros((nn, nn), dtype=np.int64),
                               _right_mul_block(C, n), zcols_b]))
    sysm = ExactMatrix(F, np.vstack(rows))
    els = []
    for v in kernel_basis(sysm):
        X = v[:nn].reshape(n, n)
        Y = v[nn: 2 * nn].reshape(n, n)
        Z = v[2 * nn:].reshape(d, d)
        els.append((X, Y, Z))
    return AlgebraBasis(F, "triple", els, check_closure=check_closure)


# -- centroid field recovery ---------------------------------------------------


class CentroidRewrite:
    """Result of writing a prime tensor over its centroid field.

    S maps new V-coordinates (F-coordinate blocks in the power basis) to the
    original ones, Q does the same for T; (S^-1, Q^-1) is a verified
    pseudo-isometry from the input tensor to flatten_to_prime(b_matrix).
    """

    __slots__ = ("field", "b_matrix", "S", "Q", "reason")

    def __init__(self, field=None, b_matrix=None, S=None, Q=None, reason=None):
        self.field = field
        self.b_matrix = b_matrix
        self.S = S
        self.Q = Q
        self.reason = reason

    @property
    def ok(self):
        return self.reason is None


def _orbit_columns(F, act, vecs_span, e):
    """Columns [v, Xv, ..., X^(e-1) v] for the first standard vector not in span."""
    n = act.shape[0]
    for idx in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[idx] = 1
        if vecs_span is not None:
            m = ExactMatrix(F, vecs_span.T)
            if solve(m, v) is not None:
                continue
        cols = [v]
        for _ in range(e - 1):
            cols.append(mat_mul(F, act, cols[-1].reshape(-1, 1)).reshape(-1))
        return np.array(cols, dtype=np.int64).T
    return None


def centroid_field_rewrite(t: TensorHandle, seed: int = 0,
                           expect_shape=(6, 3)) -> CentroidRewrite:
    """Write t over F = Cent(t) when the centroid is a field.

    Las Vegas generator search (32 seeded trials); e = dim Cent.  Fails with
    reason 'NotField' when no generator with an irreducible degree-e minimal
    polynomial shows up, and 'WrongShape' when the F-dimensions are not the
    expected ones.
    """
    F_p = t.field
    cent = centroid(t, check_closure=False)
    m = cent.dim
    assert m >= 1, "centroid always contains the scalars"
    if not cent.is_commutative():
        return CentroidRewrite(reason="NotField")
    if t.dim_v % m or t.dim_t % m:
        return CentroidRewrite(reason="WrongShape")
    gen = None
    minpoly = None
    rng = SplitMix64(seed ^ 0xCE47801D)
    if m == 1:
        gen = cent.elements[0]
        minpoly = UniPoly(F_p, [0, 1])
    else:
        for _ in range(32):
            coeffs = [rng.randint(F_p.q) for _ in range(m)]
            g = cent.combo(coeffs)
            mp = cent.min_poly(g)
            if mp.degree == m and mp.is_irreducible(seed):
                gen, minpoly = g, mp
                break
        if gen is None:
            return CentroidRewrite(reason="NotField")
    e = m
    if (t.dim_v // e, t.dim_t // e) != expect_shape:
        return CentroidRewrite(reason="WrongShape")
    F = field_make(F_p.p, e)
    if e == 1:
        B = LinearFormMatrix(F, t.forms.copy())
        S = ExactMatrix(F_p, np.eye(t.dim_v, dtype=np.int64))
        Q = ExactMatrix(F_p, np.eye(t.dim_t, dtype=np.int64))
        return CentroidRewrite(field=F, b_matrix=B, S=S, Q=Q)

    # root of the generator's minimal polynomial in the canonical field,
    # smallest code first so the choice is reproducible
    mp_F = UniPoly(F, [c % F.p for c in minpoly.coeffs])
    rho = mp_F.roots()[0]

    # express the canonical modulus root alpha in the rho-power basis, so
    # that the block bases below are alpha-power bases as flatten_to_prime
    # expects
    rho_pows_codes = [1]
    for _ in range(e - 1):
        rho_pows_codes.append(F.mul(rho_pows_codes[-1], rho))
    R = ExactMatrix(F_p, np.array([F.to_coeffs(c) for c in rho_pows_codes],
                                  dtype=np.int64).T)
    alpha_code = F.from_coeffs([0, 1] + [0] * (e - 2))
    alpha_in_rho = solve(R, np.array(F.to_coeffs(alpha_code), dtype=np.int64))
    assert alpha_in_rho is not None

    Xact, Yact, Zact = gen

    def _element_operator(base_act):
        op = np.zeros_like(base_act)
        power = np.eye(base_act.shape[0], dtype=np.int64)
        for c in alpha_in_rho:
            if c:
                op = (op + int(c) * power) % F_p.p
            power = mat_mul(F_p, power, base_act)
        return op

    alphaV = _element_operator(Xact)
    alphaT = _element_operator(Zact)
    n_v, n_t = t.dim_v, t.dim_t
    S_cols = []
    span = None
    while (0 if span is None else span.shape[0]) < n_v:
        blk = _orbit_columns(F_p, alphaV, span, e)
        assert blk is not None
        S_cols.append(blk)
        new_rows = blk.T
        span = new_rows if span is None else np.vstack([span, new_rows])
        assert rank(ExactMatrix(F_p, span)) == span.shape[0], \
            "centroid action is not free on V"
    S = ExactMatrix(F_p, np.hstack(S_cols))
    Q_cols = []
    span = None
    while (0 if span is None else span.shape[0]) < n_t:
        blk = _orbit_columns(F_p, alphaT, span, e)
        assert blk is not None
        Q_cols.append(blk)
        new_rows = blk.T
        span = new_rows if span is None else np.vstack([span, new_rows])
        assert rank(ExactMatrix(F_p, span)) == span.shape[0], \
            "centroid action is not free on T"
    Q = ExactMatrix(F_p, np.hstack(Q_cols))

    Sinv = inverse(S)
    Qinv = inverse(Q)
    # slices in the adapted basis: C^new_k = sum_l Qinv[k,l] (S^T C_l S)
    conj = [mat_mul(F_p, mat_mul(F_p, S.a.T.copy(), t.forms[l]), S.a)
            for l in range(n_t)]
    new_forms = np.zeros_like(t.forms)
    for k in range(n_t):
        acc = np.zeros((n_v, n_v), dtype=np.int64)
        for l in range(n_t):
            c = int(Qinv.a[k, l])
            if c:
                acc = (acc + c * conj[l]) % F_p.p
        new_forms[k] = acc

    # reassemble the F-level matrix from the l = l' = 0 block positions:
    # entry coefficients are read off along the alpha-power value slots
    n6, d3 = expect_shape
    slices = np.zeros((3, n6, n6), dtype=np.int64)
    for k in range(d3):
        for i in range(n6):
            for j in range(n6):
                co = [int(new_forms[k * e + mm, i * e, j * e])
                      for mm in range(e)]
                slices[k, i, j] = F.from_coeffs(co)
    B = LinearFormMatrix(F, slices)
    from .egroup import flatten_to_prime  # local: avoid import cycle
    flat = flatten_to_prime(B)
    assert (flat.forms == new_forms).all(), "field rewrite self-check failed"
    return CentroidRewrite(field=F, b_matrix=B, S=S, Q=Q)


# -- star-type recognition ----------------------------------------------------


class StarType:
    ORTHOGONAL1 = "Orthogonal1"
    LOCAL_ORTHOGONAL = "LocalOrthogonal"
    EXCHANGE = "Exchange"
    SYMPLECTIC2 = "Symplectic2"
    UNITARY1 = "Unitary1"
    OTHER = "Other"

    def __init__(self, kind, witness=None, diagnostics=""):
        self.kind = kind
        self.witness = witness
        self.diagnostics = diagnostics

    def __repr__(self):
        return f"StarType({self.kind})"

    def __eq__(self, other):
        if isinstance(other, str):
            return self.kind == other
        return isinstance(other, StarType) and self.kind == other.kind


def _identity_coeffs(A: AlgebraBasis):
    return A.member_coords(A.identity_element())


def _lagrange_idempotent(A, el, root_keep, roots_other):
    """prod (el - r)/(root_keep - r) over the other roots."""
    F = A.field
    acc = A.identity_element()
    for r in roots_other:
        shifted = tuple(F.sub(m, F.mul(np.int64(int(r)), np.eye(m.shape[0], dtype=np.int64)))
                        for m in el)
        acc = A.mul(acc, shifted)
        acc = tuple(F.mul(m, np.int64(F.inv(F.sub(root_keep, r)))) for m in acc)
    return acc


def _is_zero_el(el):
    return all(not m.any() for m in el)


def _check_exchange_pair(A, e):
    """e nontrivial idempotent with e + e* = 1 and e e* = e* e = 0."""
    F = A.field
    if _is_zero_el(e):
        return False
    ident = A.identity_element()
    if all((x == y).all() for x, y in zip(e, ident)):
        return False
    e2 = A.mul(e, e)
    if any((x != y).any() for x, y in zip(e2, e)):
        return False
    es = A.star(e)
    ssum = tuple(F.add(a, b) for a, b in zip(e, es))
    if any((x != y).any() for x, y in zip(ssum, ident)):
        return False
    if not _is_zero_el(A.mul(e, es)) or not _is_zero_el(A.mul(es, e)):
        return False
    return True


def star_type(A: AlgebraBasis, seed: int = 0) -> StarType:
    """Classify a unital *-algebra of dimension <= 4 (elliptic regime).

    dim 1 -> Orthogonal1.  dim 2: nilpotent -> LocalOrthogonal; split
    idempotent with e + e* = 1 -> Exchange; zero-divisor-free -> Unitary1.
    dim 4 -> Symplectic2 when a Las Vegas idempotent search produces a
    witness e with e + e* = 1, e e* = 0.  Anything else -> Other.
    """
    d = A.dim
    if d == 0:
        return StarType(StarType.OTHER, diagnostics="empty algebra")
    if d > 4:
        return StarType(StarType.OTHER,
                        diagnostics=f"UnexpectedDimension: {d}")
    if not A.has_identity():
        return StarType(StarType.OTHER, diagnostics="no identity")
    if d == 1:
        return StarType(StarType.ORTHOGONAL1, witness=A.elements[0])
    F = A.field
    if d == 2:
        ident_coords = _identity_coeffs(A)
        g = None
        for i, el in enumerate(A.elements):
            c = np.zeros(2, dtype=np.int64)
            c[i] = 1
            m = ExactMatrix(F, np.array([ident_coords], dtype=np.int64).T)
            if solve(m, c) is None:
                g = el
                break
        assert g is not None
        mp = A.min_poly(g)
        assert mp.degree == 2, "dim-2 algebra generator has quadratic min poly"
        facs = mp.factor(seed)
        if len(facs) == 1 and facs[0][1] == 1:
            return StarType(StarType.UNITARY1, witness=g)
        if len(facs) == 1 and facs[0][1] == 2:
            r = F.neg(facs[0][0].coeffs[0])
            nil = tuple(F.sub(m, F.mul(np.int64(int(r)),
                                       np.eye(m.shape[0], dtype=np.int64)))
                        for m in g)
            assert not _is_zero_el(nil) and _is_zero_el(A.mul(nil, nil))
            return StarType(StarType.LOCAL_ORTHOGONAL, witness=nil)
        r1 = F.neg(facs[0][0].coeffs[0])
        r2 = F.neg(facs[1][0].coeffs[0])
        e = _lagrange_idempotent(A, g, r1, [r2])
        if _check_exchange_pair(A, e):
            return StarType(StarType.EXCHANGE, witness=e)
        return StarType(StarType.OTHER,
                        diagnostics="split dim-2 algebra, star not exchange")
    # d == 4: hunt for a symplectic idempotent witness
    rng = SplitMix64(seed ^ 0x5CA1AB1E)
    for _ in range(32):
        coeffs = [rng.randint(F.q) for _ in range(4)]
        g = A.combo(coeffs)
        mp = A.min_poly(g)
        roots = [F.neg(f.coeffs[0]) for f, m in mp.factor(seed) if f.degree == 1]
        if len(roots) < 2:
            continue
        others = [r for r in roots[1:]]
        e = _lagrange_idempotent(A, g, roots[0], others)
        e2 = A.mul(e, e)
        if any((x != y).any() for x, y in zip(e2, e)):
            continue
        if _check_exchange_pair(A, e):
            return StarType(StarType.SYMPLECTIC2, witness=e)
        comp = tuple(F.sub(i, m) for i, m in zip(A.identity_element(), e))
        if _check_exchange_pair(A, comp):
            return StarType(StarType.SYMPLECTIC2, witness=comp)
    return StarType(StarType.OTHER,
                    diagnostics="dim-4 algebra without symplectic witness")


# -- isotropic decomposition ---------------------------------------------------


def _column_space_basis(F, M):
    """Columns of M at the pivot positions of its RREF."""
    _, _, piv = rref(ExactMatrix(F, M))
    return M[:, piv]


def isotropic_decomposition(B: LinearFormMatrix, seed: int = 0):
    """X in GL with X^T B X having zero diagonal half-blocks, or None.

    Exists exactly when the adjoint star type is Exchange or Symplectic2;
    the idempotent witness's column span and its complement give the two
    totally isotropic summands.
    """
    A = adjoint(B, check_closure=False)
    st = star_type(A, seed)
    if st.kind not in (StarType.EXCHANGE, StarType.SYMPLECTIC2):
        return None
    F = B.field
    n = B.n
    Xe, _ = st.witness
    comp = F.sub(np.eye(n, dtype=np.int64), Xe)
    U = _column_space_basis(F, Xe)
    W = _column_space_basis(F, comp)
    if U.shape[1] + W.shape[1] != n or U.shape[1] != n // 2:
        return None
    X = ExactMatrix(F, np.hstack([U, W]))
    G = B.congruence(X, X)
    half = n // 2
    for k in range(3):
        if G.slices[k][:half, :half].any() or G.slices[k][half:, half:].any():
            raise AssertionError("idempotent did not produce zero blocks")
    return X


# -- totally isotropic 3-subspace census --------------------------------------


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    return num // den


class TiReport:
    def __init__(self, count, q, representatives):
        self.count = count
        self.q = q
        self.representatives = representatives

    @property
    def count_class(self):
        if self.count in (0, 1, 2):
            return self.count
        if self.count == self.q + 1:
            return self.q + 1
        return None  # outside the elliptic value set

    def __repr__(self):
        return f"TiReport(count={self.count})"


def _rref_bases_for_pattern(q, pivots):
    """All RREF row-bases (N, 3, 6) with the given pivot columns."""
    free_pos = []
    for r, pc in enumerate(pivots):
        for c in range(pc + 1, 6):
            if c not in pivots:
                free_pos.append((r, c))
    nf = len(free_pos)
    N = q ** nf
    U = np.zeros((N, 3, 6), dtype=np.int64)
    for r, pc in enumerate(pivots):
        U[:, r, pc] = 1
    if nf:
        codes = np.arange(N, dtype=np.int64)
        for idx, (r, c) in enumerate(free_pos):
            U[:, r, c] = (codes // (q ** idx)) % q
    return U


def ti_count_bruteforce(B: LinearFormMatrix, limit: int = 5_000_000) -> TiReport:
    """Exact census of 3-dimensional totally isotropic subspaces of F^6.

    Iterates canonical RREF representatives per pivot pattern; a subspace
    counts when all three forms vanish on all basis pairs.  Prime fields
    use a vectorized integer path; q above the limit raises TooLarge.
    """
    F = B.field
    q = F.q
    total = gaussian_binomial(6, 3, q)
    if total > limit:
        raise TooLarge(f"{total} subspaces exceed limit {limit}")
    count = 0
    reps = []
    pairs = ((0, 1), (0, 2), (1, 2))
    for pivots in combinations(range(6), 3):
        U = _rref_bases_for_pattern(q, pivots)
        if F.e == 1:
            mask = np.ones(len(U), dtype=bool)
            for k in range(3):
                C = B.slices[k]
                for (i, j) in pairs:
                    vals = np.einsum('nf,fg,ng->n', U[:, i, :], C, U[:, j, :]) % q
                    mask &= vals == 0
        else:
            mask = np.ones(len(U), dtype=bool)
            for k in range(3):
                C = B.slices[k]
                for (i, j) in pairs:
                    w = np.zeros(len(U), dtype=np.int64)
                    for f in range(6):
                        for g in range(6):
                            c = int(C[f, g])
                            if c:
                                w = F.add(w, F.mul(np.int64(c),
                                                   F.mul(U[:, i, f], U[:, j, g])))
                    mask &= w == 0
        hits = int(mask.sum())
        count += hits
        if hits and len(reps) < q + 2:
            for idx in np.nonzero(mask)[0][: q + 2 - len(reps)]:
                reps.append(ExactMatrix(F, U[idx]))
    return TiReport(count, q, reps)
