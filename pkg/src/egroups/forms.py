"""Matrices of linear forms in three variables and plane cubics.

The frozen monomial order for ternary cubics is

    y1^3, y1^2 y2, y1^2 y3, y1 y2^2, y1 y2 y3, y1 y3^2,
    y2^3, y2^2 y3, y2 y3^2, y3^3

and every coefficientwise comparison in the package depends on it.
Projective points are normalized so the first nonzero coordinate is 1, and
the canonical order on P^2 is lexicographic on the normalized coordinate
triple: (0:0:1), then (0:1:t), then (1:s:t).
"""

import numpy as np

from .errors import (NotAFlex, NotSkew, SingularAfterNormalize,
                     SingularTransform)
from .fields import FieldSpec, field_make
from .linalg import ExactMatrix, det, is_invertible, mat_mul, rank

MONOMIALS3 = ((3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
              (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3))
MONOMIALS2 = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
_M3_INDEX = {m: i for i, m in enumerate(MONOMIALS3)}
_M2_INDEX = {m: i for i, m in enumerate(MONOMIALS2)}


def _mono_mul(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def lin_mul_lin(F, l1, l2):
    """Product of two linear forms (3 codes each) as a quadric (6 codes)."""
    out = [0] * 6
    for i in range(3):
        if l1[i] == 0:
            continue
        for j in range(3):
            if l2[j] == 0:
                continue
            m = [0, 0, 0]
            m[i] += 1
            m[j] += 1
            k = _M2_INDEX[tuple(m)]
            out[k] = F.add(out[k], F.mul(int(l1[i]), int(l2[j])))
    return out


def quad_mul_lin(F, q, l):
    """Quadric (6 codes) times linear form (3 codes) as a cubic (10 codes)."""
    out = [0] * 10
    for i, m2 in enumerate(MONOMIALS2):
        if q[i] == 0:
            continue
        for j in range(3):
            if l[j] == 0:
                continue
            m = list(m2)
            m[j] += 1
            k = _M3_INDEX[tuple(m)]
            out[k] = F.add(out[k], F.mul(int(q[i]), int(l[j])))
    return out


class ProjPoint:
    """Point of P^2 with the first nonzero coordinate scaled to 1."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        x = [int(c) for c in coords]
        if all(c == 0 for c in x):
            raise ValueError("(0,0,0) is not a projective point")
        for c in x:
            if c != 0:
                inv = field.inv(c)
                x = [field.mul(inv, v) for v in x]
                break
        self.field = field
        self.coords = tuple(x)

    def __eq__(self, other):
        return (isinstance(other, ProjPoint) and self.field == other.field
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        return f"({self.coords[0]}:{self.coords[1]}:{self.coords[2]})"


class TernaryCubic:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        c = [int(x) for x in coeffs]
        if len(c) != 10:
            raise ValueError("a ternary cubic has 10 coefficients")
        self.field = field
        self.coeffs = tuple(c)

    def __eq__(self, other):
        return (isinstance(other, TernaryCubic) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"TernaryCubic({list(self.coeffs)})"

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def scale(self, c):
        F = self.field
        return TernaryCubic(F, [F.mul(c, x) for x in self.coeffs])

    def coeff(self, mono):
        return self.coeffs[_M3_INDEX[mono]]

    def eval_many(self, Y):
        """Evaluate on points given as a (3, N) code array."""
        F = self.field
        y1, y2, y3 = Y[0], Y[1], Y[2]
        pw = []
        for v in (y1, y2, y3):
            p0 = np.ones_like(v)
            p1 = v
            p2 = F.mul(v, v)
            p3 = F.mul(p2, v)
            pw.append((p0, p1, p2, p3))
        acc = np.zeros_like(y1)
        for c, (a, b, d) in zip(self.coeffs, MONOMIALS3):
            if c == 0:
                continue
            term = F.mul(np.int64(c), F.mul(pw[0][a], F.mul(pw[1][b], pw[2][d])))
            acc = F.add(acc, term)
        return acc

    def eval_point(self, pt):
        coords = pt.coords if isinstance(pt, ProjPoint) else tuple(pt)
        arr = np.array([[coords[0]], [coords[1]], [coords[2]]], dtype=np.int64)
        return int(self.eval_many(arr)[0])

    def gradient(self):
        """The three partial derivatives as quadrics (lists of 6 codes)."""
        F = self.field
        out = []
        for v in range(3):
            g = [0] * 6
            for c, m in zip(self.coeffs, MONOMIALS3):
                if c == 0 or m[v] == 0:
                    continue
                dm = list(m)
                dm[v] -= 1
                k = _M2_INDEX[tuple(dm)]
                g[k] = F.add(g[k], F.mul(m[v] % F.p, c))
            out.append(g)
        return out

    def substitute(self, Z: ExactMatrix) -> "TernaryCubic":
        """f(Z y) by symbolic expansion."""
        F = self.field
        rows = [list(map(int, Z.a[i])) for i in range(3)]
        out = [0] * 10
        for c, m in zip(self.coeffs, MONOMIALS3):
            if c == 0:
                continue
            factors = []
            for v in range(3):
                factors.extend([rows[v]] * m[v])
            q = lin_mul_lin(F, factors[0], factors[1])
            cub = quad_mul_lin(F, q, factors[2])
            for k in range(10):
                out[k] = F.add(out[k], F.mul(c, cub[k]))
        return TernaryCubic(F, out)

    def map_coeffs(self, fn):
        return TernaryCubic(self.field, [fn(c) for c in self.coeffs])

    def to_json(self):
        return {"field": self.field.to_json(),
                "coeffs": [self.field.to_coeffs(c) for c in self.coeffs]}

    @staticmethod
    def from_json(obj):
        F = FieldSpec.from_json(obj["field"])
        return TernaryCubic(F, [F.from_coeffs(c) for c in obj["coeffs"]])


class LinearFormMatrix:
    """n x n matrix over F[y1,y2,y3]_1 held as three constant slices.

    slices has shape (3, n, n); M(y) = slices[0] y1 + slices[1] y2 +
    slices[2] y3.
    """

    __slots__ = ("field", "n", "slices")

    def __init__(self, field, slices):
        arr = np.asarray(slices, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[0] != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError("slices must have shape (3, n, n)")
        self.field = field
        self.n = arr.shape[1]
        self.slices = arr

    def slice(self, k) -> ExactMatrix:
        return ExactMatrix(self.field, self.slices[k])

    def entry(self, i, j):
        """Linear form at (i, j) as its 3 coefficients."""
        return [int(self.slices[k, i, j]) for k in range(3)]

    def __eq__(self, other):
        return (isinstance(other, LinearFormMatrix) and self.field == other.field
                and self.slices.shape == other.slices.shape
                and bool((self.slices == other.slices).all()))

    def __repr__(self):
        return f"LinearFormMatrix(n={self.n})"

    def is_skew(self):
        F = self.field
        for k in range(3):
            s = self.slices[k]
            if not (F.neg(s.T) == s).all() or s.diagonal().any():
                return False
        return True

    @property
    def T(self):
        return LinearFormMatrix(self.field,
                                np.stack([self.slices[k].T for k in range(3)]))

    def eval_at(self, y) -> ExactMatrix:
        F = self.field
        acc = np.zeros((self.n, self.n), dtype=np.int64)
        for k in range(3):
            acc = F.add(acc, F.mul(self.slices[k], np.int64(int(y[k]))))
        return ExactMatrix(F, acc)

    def substitute(self, Z: ExactMatrix) -> "LinearFormMatrix":
        """M(Z y): new slice l is sum_k Z[k, l] * slice_k."""
        F = self.field
        out = []
        for l in range(3):
            acc = np.zeros((self.n, self.n), dtype=np.int64)
            for k in range(3):
                acc = F.add(acc, F.mul(self.slices[k], np.int64(int(Z.a[k, l]))))
            out.append(acc)
        return LinearFormMatrix(F, np.stack(out))

    def congruence(self, X: ExactMatrix, Y: ExactMatrix,
                   require_invertible=False) -> "LinearFormMatrix":
        """Slicewise X^T S Y."""
        F = self.field
        if require_invertible and not (is_invertible(X) and is_invertible(Y)):
            raise SingularTransform("congruence transform is singular")
        xt = X.a.T.copy()
        out = [mat_mul(F, mat_mul(F, xt, self.slices[k]), Y.a) for k in range(3)]
        return LinearFormMatrix(F, np.stack(out))

    def galois_twist(self, k: int) -> "LinearFormMatrix":
        F = self.field
        return LinearFormMatrix(F, F.frobenius(self.slices, k))

    def add(self, other):
        return LinearFormMatrix(self.field,
                                self.field.add(self.slices, other.slices))

    def det3(self) -> TernaryCubic:
        """Determinant of a 3x3 matrix of linear forms, as a cubic."""
        if self.n != 3:
            raise ValueError("det3 requires a 3x3 matrix")
        F = self.field
        out = [0] * 10
        perms = (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                 ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1))
        for perm, sgn in perms:
            l0 = self.entry(0, perm[0])
            l1 = self.entry(1, perm[1])
            l2 = self.entry(2, perm[2])
            cub = quad_mul_lin(F, lin_mul_lin(F, l0, l1), l2)
            for k in range(10):
                term = cub[k] if sgn == 1 else F.neg(cub[k])
                out[k] = F.add(out[k], term)
        return TernaryCubic(F, out)

    def to_json(self):
        return {"field": self.field.to_json(), "n": self.n,
                "slices": [ExactMatrix(self.field, self.slices[k]).to_json()
                           for k in range(3)]}

    @staticmethod
    def from_json(obj):
        F = FieldSpec.from_json(obj["field"])
        slices = [ExactMatrix.from_json(F, s).a for s in obj["slices"]]
        return LinearFormMatrix(F, np.stack(slices))


def _is_neg_transpose(F, s):
    return bool((F.neg(s.T) == s).all())


def eval_linear_matrix(M: LinearFormMatrix, y) -> ExactMatrix:
    return M.eval_at(y)


# -- Pfaffian -------------------------------------------------------------

def _matchings6():
    """All 15 perfect matchings of {0..5} with permutation signs."""
    out = []

    def rec(remaining, pairs):
        if not remaining:
            perm = [i for pair in pairs for i in pair]
            out.append((list(pairs), _perm_sign(perm)))
            return
        i = remaining[0]
        for j in remaining[1:]:
            rest = [k for k in remaining if k not in (i, j)]
            rec(rest, pairs + [(i, j)])

    rec(list(range(6)), [])
    return out


def _perm_sign(perm):
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


_MATCHINGS6 = _matchings6()


def pfaffian6(B: LinearFormMatrix) -> TernaryCubic:
    """Pfaffian of a skew-symmetric 6x6 matrix of linear forms.

    Sign convention: the constant standard symplectic form (three diagonal
    blocks [[0,1],[-1,0]]) times y1 has Pfaffian y1^3.
    """
    if B.n != 6:
        raise ValueError("pfaffian6 requires a 6x6 matrix")
    if not B.is_skew():
        raise NotSkew("matrix is not skew-symmetric with zero diagonal")
    F = B.field
    out = [0] * 10
    for pairs, sgn in _MATCHINGS6:
        (i1, j1), (i2, j2), (i3, j3) = pairs
        q = lin_mul_lin(F, B.entry(i1, j1), B.entry(i2, j2))
        cub = quad_mul_lin(F, q, B.entry(i3, j3))
        for k in range(10):
            term = cub[k] if sgn == 1 else F.neg(cub[k])
            out[k] = F.add(out[k], term)
    return TernaryCubic(F, out)


# -- point enumeration and smoothness --------------------------------------

def proj_plane_points(F, chunk=1 << 18):
    """Yield (3, m) code arrays covering P^2(F) once, in canonical order."""
    q = F.q
    yield np.array([[0], [0], [1]], dtype=np.int64)
    t = np.arange(q, dtype=np.int64)
    yield np.stack([np.zeros(q, dtype=np.int64), np.ones(q, dtype=np.int64), t])
    per_row = max(1, chunk // q)
    for s0 in range(0, q, per_row):
        s = np.arange(s0, min(s0 + per_row, q), dtype=np.int64)
        ss, tt = np.meshgrid(s, t, indexing="ij")
        ss = ss.ravel()
        tt = tt.ravel()
        yield np.stack([np.ones_like(ss), ss, tt])


def _grad_eval_many(F, grads, Y):
    """Evaluate three quadrics on a (3, N) point array; returns (3, N)."""
    y1, y2, y3 = Y[0], Y[1], Y[2]
    mono_vals = []
    for (a, b, c) in MONOMIALS2:
        v = np.ones_like(y1)
        for base, expo in ((y1, a), (y2, b), (y3, c)):
            for _ in range(expo):
                v = F.mul(v, base)
        mono_vals.append(v)
    out = []
    for g in grads:
        acc = np.zeros_like(y1)
        for coef, mv in zip(g, mono_vals):
            if coef:
                acc = F.add(acc, F.mul(np.int64(coef), mv))
        out.append(acc)
    return np.stack(out)


def singular_points(f: TernaryCubic, max_ext: int = 1):
    """All singular points over GF(q^k), k <= max_ext, by exhaustive scan.

    Returns [(k, ProjPoint over GF(q^k))] with k the minimal field of
    definition.  Intended for small q; the scan is O(q^(2*max_ext)).
    """
    if f.is_zero():
        raise ValueError("zero cubic")
    F = f.field
    out = []
    for k in range(1, max_ext + 1):
        if k == 1:
            L, fk = F, f
        else:
            L = field_make(F.p, F.e * k)
            emb = F.embed_into(L)
            fk = TernaryCubic(L, [int(emb[c]) for c in f.coeffs])
        grads = fk.gradient()
        subfield_exps = [F.p ** (F.e * j) for j in range(1, k) if k % j == 0]
        for Y in proj_plane_points(L):
            vals = fk.eval_many(Y)
            gv = _grad_eval_many(L, grads, Y)
            mask = (vals == 0) & (gv == 0).all(axis=0)
            idx = np.nonzero(mask)[0]
            for i in idx:
                coords = [int(Y[0][i]), int(Y[1][i]), int(Y[2][i])]
                if k > 1 and any(all(L.pow_int(c, pe) == c for c in coords)
                                 for pe in subfield_exps):
                    continue  # already reported over a subfield
                out.append((k, ProjPoint(L, coords)))
    return out


def hessian_cubic(f: TernaryCubic) -> TernaryCubic:
    """Determinant of the matrix of second partials (a ternary cubic)."""
    F = f.field
    slices = np.zeros((3, 3, 3), dtype=np.int64)
    for c, m in zip(f.coeffs, MONOMIALS3):
        if c == 0:
            continue
        for i in range(3):
            if m[i] == 0:
                continue
            mi = list(m)
            mi[i] -= 1
            ci = F.mul(m[i] % F.p, c)
            for j in range(3):
                if mi[j] == 0:
                    continue
                mj = list(mi)
                mj[j] -= 1
                cij = F.mul(mi[j] % F.p, ci)
                var = mj.index(1)
                slices[var, i, j] = F.add(int(slices[var, i, j]), cij)
    H = LinearFormMatrix(F, slices)
    return H.det3()


def discriminant(f: TernaryCubic) -> int:
    """Scalar vanishing exactly when the cubic is singular (char >= 5).

    Computed as the 6x6 determinant built from the three partials of f and
    the three partials of the Hessian cubic; this is a fixed nonzero
    multiple of the resultant of the partials.
    """
    F = f.field
    rows = list(f.gradient())
    H = hessian_cubic(f)
    rows.extend(H.gradient())
    M = ExactMatrix(F, np.array(rows, dtype=np.int64))
    return det(M)


def is_smooth(f: TernaryCubic) -> bool:
    return not f.is_zero() and discriminant(f) != 0


def rational_flexes(f: TernaryCubic):
    """All rational flexes: smooth points of f where the Hessian vanishes.

    Returned in canonical point order; scan is O(q^2).
    """
    if f.is_zero():
        raise ValueError("zero cubic")
    F = f.field
    H = hessian_cubic(f)
    grads = f.gradient()
    out = []
    for Y in proj_plane_points(F):
        fv = f.eval_many(Y)
        hv = H.eval_many(Y)
        mask = (fv == 0) & (hv == 0)
        if not mask.any():
            continue
        gv = _grad_eval_many(F, grads, Y)
        mask &= (gv != 0).any(axis=0)
        for i in np.nonzero(mask)[0]:
            out.append(ProjPoint(F, [int(Y[0][i]), int(Y[1][i]), int(Y[2][i])]))
    return out


# -- Weierstrass normalization ---------------------------------------------

class WeierstrassTransform:
    """Data of the identity f(Z y) = scale * (y1^3 + a y1 y3^2 + b y3^3 - y2^2 y3)."""

    __slots__ = ("Z", "scale", "a", "b")

    def __init__(self, Z, scale, a, b):
        self.Z = Z
        self.scale = scale
        self.a = a
        self.b = b

    def target_cubic(self, field) -> TernaryCubic:
        return weierstrass_cubic(field, self.a, self.b)

    def verify(self, f: TernaryCubic) -> bool:
        lhs = f.substitute(self.Z)
        rhs = self.target_cubic(f.field).scale(self.scale)
        return lhs == rhs


def weierstrass_cubic(field, a, b) -> TernaryCubic:
    """y1^3 + a y1 y3^2 + b y3^3 - y2^2 y3 in the frozen monomial order."""
    c = [0] * 10
    c[_M3_INDEX[(3, 0, 0)]] = 1
    c[_M3_INDEX[(1, 0, 2)]] = int(a)
    c[_M3_INDEX[(0, 0, 3)]] = int(b)
    c[_M3_INDEX[(0, 2, 1)]] = field.neg(1)
    return TernaryCubic(field, c)


def _complete_basis(F, col):
    """Deterministic invertible matrix with the given second column."""
    cols = [None, list(col), None]
    chosen = []
    for e_i in range(3):
        cand = [0, 0, 0]
        cand[e_i] = 1
        test = [cols[1]] + chosen + [cand]
        m = ExactMatrix(F, np.array(test, dtype=np.int64))
        if rank(m) == len(test):
            chosen.append(cand)
        if len(chosen) == 2:
            break
    cols[0], cols[2] = chosen[0], chosen[1]
    return ExactMatrix(F, np.array(cols, dtype=np.int64).T)


def weierstrass_normalize(f: TernaryCubic, flex: ProjPoint) -> WeierstrassTransform:
    """Linear change of coordinates carrying a flex to (0:1:0).

    Pipeline: move the flex to (0:1:0) and its tangent to y3 = 0; the flex
    condition forces the restriction to the tangent to be c*y1^3; then a
    y2-shear kills the y1 y2 y3 and y2 y3^2 terms, a y1-shear kills y1^2 y3,
    and a final diagonal scaling lands on the short Weierstrass shape
    (char >= 5 throughout).
    """
    F = f.field
    if f.eval_point(flex) != 0:
        raise NotAFlex("point is not on the cubic")

    T1 = _complete_basis(F, flex.coords)
    g = f.substitute(T1)

    gr = g.gradient()
    O = np.array([[0], [1], [0]], dtype=np.int64)
    v = [int(x[0]) for x in _grad_eval_many(F, gr, O)]
    if v == [0, 0, 0]:
        raise NotAFlex("cubic is singular at the flex candidate")
    assert v[1] == 0, "gradient at (0:1:0) should have no y2 component"
    if v[2] != 0:
        k = F.neg(F.div(v[0], v[2]))
        T2 = ExactMatrix(F, np.array([[1, 0, 0], [0, 1, 0], [k, 0, 1]],
                                     dtype=np.int64))
    else:
        T2 = ExactMatrix(F, np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]],
                                     dtype=np.int64))
    h = g.substitute(T2)

    if h.coeff((2, 1, 0)) != 0:
        raise NotAFlex("tangent line meets the cubic with multiplicity < 3")
    c = h.coeff((3, 0, 0))
    s = h.coeff((0, 2, 1))
    if c == 0 or s == 0:
        raise NotAFlex("degenerate tangent configuration")
    assert h.coeff((0, 3, 0)) == 0 and h.coeff((1, 2, 0)) == 0

    inv2s = F.inv(F.mul(2, s))
    k1 = F.neg(F.mul(h.coeff((1, 1, 1)), inv2s))
    k3 = F.neg(F.mul(h.coeff((0, 1, 2)), inv2s))
    T4 = ExactMatrix(F, np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                 dtype=np.int64))
    T4.a[1, 0] = k1
    T4.a[1, 2] = k3
    h = h.substitute(T4)

    k5 = F.neg(F.div(h.coeff((2, 0, 1)), F.mul(3, c)))
    T5 = ExactMatrix(F, np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                 dtype=np.int64))
    T5.a[0, 2] = k5
    h = h.substitute(T5)

    u2 = h.coeff((1, 0, 2))
    u3 = h.coeff((0, 0, 3))
    alpha = F.neg(F.div(c, s))
    inv_alpha = F.inv(alpha)
    T6 = ExactMatrix(F, np.diag([inv_alpha, inv_alpha, 1]).astype(np.int64))
    a = F.div(F.mul(c, u2), F.mul(s, s))
    b = F.neg(F.div(F.mul(F.mul(c, c), u3), F.mul(F.mul(s, s), s)))
    scale = F.neg(F.div(F.mul(F.mul(s, s), s), F.mul(c, c)))

    Z = T1 @ T2 @ T4 @ T5 @ T6
    wt = WeierstrassTransform(Z, scale, a, b)
    if not wt.verify(f):
        raise NotAFlex("normalization identity failed; point is not a flex")
    disc = F.add(F.mul(4, F.pow_int(a, 3)), F.mul(F.of_int(27), F.mul(b, b)))
    if disc == 0:
        raise SingularAfterNormalize(a, b)
    return wt
