"""Groups of order q^9 from determinantal representations of elliptic curves.

The 3x3 matrix attached to a curve point P = (lam, mu) on y^2 = x^3+ax+b is

        [ y1 - lam y3     y2 - mu y3          0  ]
        [ y2 + mu y3      lam y1+(a+lam^2)y3  y1 ]
        [ 0               y1                 -y3 ]

whose determinant is exactly the homogenized curve equation; the group
comes from the 6x6 skew block matrix [[0, J], [-J^T, 0]] via the Baer
product (v,w)(v',w') = (v+v', w+w' + t(v,v')/2).
"""

import numpy as np

from .ecurve import ECPoint, EllipticCurve
from .errors import NotTwoTorsion, PointAtInfinity
from .fields import field_make
from .forms import LinearFormMatrix
from .linalg import ExactMatrix, is_invertible, random_invertible
from .rng import SplitMix64
from .tensor import TensorHandle


def j_matrix(E: EllipticCurve, P: ECPoint) -> LinearFormMatrix:
    if P.inf:
        raise PointAtInfinity("the construction needs an affine point")
    E.check(P)
    F = E.field
    lam, mu = P.x, P.y
    S = np.zeros((3, 3, 3), dtype=np.int64)
    S[0, 0, 0] = 1
    S[2, 0, 0] = F.neg(lam)
    S[1, 0, 1] = 1
    S[2, 0, 1] = F.neg(mu)
    S[1, 1, 0] = 1
    S[2, 1, 0] = mu
    S[0, 1, 1] = lam
    S[2, 1, 1] = F.add(E.a, F.mul(lam, lam))
    S[0, 1, 2] = 1
    S[0, 2, 1] = 1
    S[2, 2, 2] = F.neg(1)
    return LinearFormMatrix(F, S)


def hessian_matrix_rep(E: EllipticCurve, P: ECPoint) -> LinearFormMatrix:
    """The symmetric 3x3 representative available at 2-torsion points."""
    if P.inf:
        raise PointAtInfinity("the construction needs an affine point")
    E.check(P)
    if P.y != 0:
        raise NotTwoTorsion("the Hessian representative needs a 2-torsion point")
    F = E.field
    a, b, lam = E.a, E.b, P.x
    S = np.zeros((3, 3, 3), dtype=np.int64)
    # entries: row 0: 3 lam x + a z, y, a lam z + a x + 3 b z
    S[0, 0, 0] = F.mul(3, lam)
    S[2, 0, 0] = a
    S[1, 0, 1] = 1
    S[0, 0, 2] = a
    S[2, 0, 2] = F.add(F.mul(a, lam), F.mul(3, b))
    # row 1: y, x - lam z, -lam y
    S[1, 1, 0] = 1
    S[0, 1, 1] = 1
    S[2, 1, 1] = F.neg(lam)
    S[1, 1, 2] = F.neg(lam)
    # row 2: sym, -lam y, a lam x + 3 lam b z + 3 b x - a^2 z
    S[0, 2, 0] = a
    S[2, 2, 0] = F.add(F.mul(a, lam), F.mul(3, b))
    S[1, 2, 1] = F.neg(lam)
    S[0, 2, 2] = F.add(F.mul(a, lam), F.mul(3, b))
    S[2, 2, 2] = F.sub(F.mul(F.mul(3, lam), b), F.mul(a, a))
    return LinearFormMatrix(F, S)


def b_matrix(E: EllipticCurve, P: ECPoint) -> LinearFormMatrix:
    """[[0, J], [-J^T, 0]], skew by construction."""
    J = j_matrix(E, P)
    F = E.field
    S = np.zeros((3, 6, 6), dtype=np.int64)
    for k in range(3):
        S[k, :3, 3:] = J.slices[k]
        S[k, 3:, :3] = F.neg(J.slices[k].T)
    return LinearFormMatrix(F, S)


class EGroupSpec:
    """Curve-with-point data and its cached 6x6 matrix."""

    __slots__ = ("curve", "point", "b")

    def __init__(self, curve: EllipticCurve, point: ECPoint):
        curve.check(point)
        if point.inf:
            raise PointAtInfinity("P must be affine")
        self.curve = curve
        self.point = point
        self.b = b_matrix(curve, point)

    def group(self) -> "BaerGroup":
        return BaerGroup(self.b)

    def to_json(self):
        return {"curve": self.curve.to_json(),
                "point": self.point.to_json(self.curve.field)}

    @staticmethod
    def from_json(obj):
        E = EllipticCurve.from_json(obj["curve"])
        return EGroupSpec(E, ECPoint.from_json(E.field, obj["point"]))


class GroupElement:
    __slots__ = ("v", "w")

    def __init__(self, v, w):
        self.v = np.asarray(v, dtype=np.int64)
        self.w = np.asarray(w, dtype=np.int64)

    def __eq__(self, other):
        return (isinstance(other, GroupElement)
                and (self.v == other.v).all() and (self.w == other.w).all())

    def __repr__(self):
        return f"({self.v.tolist()} | {self.w.tolist()})"


class BaerGroup:
    """Group on F^n x F^d with product (v,w)(v',w') = (v+v', w+w'+t(v,v')/2).

    Works for any alternating matrix of linear forms over F (or a prime
    TensorHandle); requires p odd so 1/2 exists.
    """

    def __init__(self, t):
        if isinstance(t, LinearFormMatrix):
            self.field = t.field
            self.slices = t.slices
        elif isinstance(t, TensorHandle):
            self.field = t.field
            self.slices = t.forms
        else:
            raise TypeError("expected LinearFormMatrix or TensorHandle")
        self.dim_v = self.slices.shape[1]
        self.dim_t = self.slices.shape[0]

    def t_value(self, v, vp):
        """t(v, v') as a length-d code vector."""
        F = self.field
        v = np.asarray(v, dtype=np.int64)
        vp = np.asarray(vp, dtype=np.int64)
        out = np.zeros(self.dim_t, dtype=np.int64)
        if F.e == 1:
            for k in range(self.dim_t):
                out[k] = int(v @ self.slices[k] @ vp % F.p)
            return out
        for k in range(self.dim_t):
            col = _field_colsum(F, F.mul(v[:, None], self.slices[k]))
            prod = F.mul(col, vp)
            s = 0
            for x in prod:
                s = F.add(s, int(x))
            out[k] = s
        return out

    def identity(self):
        return GroupElement(np.zeros(self.dim_v, dtype=np.int64),
                            np.zeros(self.dim_t, dtype=np.int64))

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        F = self.field
        v = F.add(g.v, h.v)
        tv = self.t_value(g.v, h.v)
        w = F.add(F.add(g.w, h.w), F.mul(tv, np.int64(F.half)))
        return GroupElement(v, w)

    def inv(self, g: GroupElement) -> GroupElement:
        F = self.field
        return GroupElement(F.neg(g.v), F.neg(g.w))

    def comm(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))

    def power(self, g: GroupElement, k: int) -> GroupElement:
        acc = self.identity()
        base = g
        if k < 0:
            base = self.inv(g)
            k = -k
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def random_element(self, rng: SplitMix64) -> GroupElement:
        F = self.field
        v = np.array([rng.randint(F.q) for _ in range(self.dim_v)], dtype=np.int64)
        w = np.array([rng.randint(F.q) for _ in range(self.dim_t)], dtype=np.int64)
        return GroupElement(v, w)


def _field_colsum(F, m):
    acc = np.zeros(m.shape[1], dtype=np.int64)
    for row in m:
        acc = F.add(acc, row)
    return acc


def flatten_to_prime(B: LinearFormMatrix) -> TensorHandle:
    """Rewrite an n x n matrix of linear forms over GF(p^e) as a prime tensor.

    Coordinates expand along the power basis {1, x, ..., x^(e-1)} of the
    modulus root: row i of B becomes rows (i*e .. i*e+e-1), value slot k
    becomes slots (k*e .. k*e+e-1), and the structure constant at
    ((i,l), (j,l')) in slot (k,m) is the m-th coefficient of
    x^(l+l') * B_k[i,j].
    """
    F = B.field
    e = F.e
    n = B.n
    Fp = field_make(F.p)
    if e == 1:
        return TensorHandle(Fp, B.slices.copy())
    alpha_pows = [1]
    x = F.from_coeffs([0, 1] + [0] * (e - 2))
    for _ in range(2 * e - 2):
        alpha_pows.append(F.mul(alpha_pows[-1], x))
    out = np.zeros((3 * e, n * e, n * e), dtype=np.int64)
    for k in range(3):
        for i in range(n):
            for j in range(n):
                b = int(B.slices[k, i, j])
                if b == 0:
                    continue
                for l in range(e):
                    for lp in range(e):
                        val = F.mul(b, alpha_pows[l + lp])
                        co = F.to_coeffs(val)
                        for m in range(e):
                            if co[m]:
                                out[k * e + m, i * e + l, j * e + lp] = co[m]
    return TensorHandle(Fp, out)


def flat_matrix(F, X: ExactMatrix) -> ExactMatrix:
    """GF(p)-matrix of v -> X v on power-basis coordinates (n*e x n*e)."""
    e = F.e
    n = X.rows
    Fp = field_make(F.p)
    if e == 1:
        return ExactMatrix(Fp, X.a.copy())
    x = F.from_coeffs([0, 1] + [0] * (e - 2))
    pows = [1]
    for _ in range(e - 1):
        pows.append(F.mul(pows[-1], x))
    out = np.zeros((n * e, n * e), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            c = int(X.a[i, j])
            if c == 0:
                continue
            for lp in range(e):
                co = F.to_coeffs(F.mul(c, pows[lp]))
                for l in range(e):
                    out[i * e + l, j * e + lp] = co[l]
    return ExactMatrix(Fp, out)


def frobenius_flat(F, k: int = 1) -> ExactMatrix:
    """GF(p)-matrix of coefficientwise sigma^k on one F-coordinate."""
    return ExactMatrix(field_make(F.p), F.frobenius_matrix(k))


def frobenius_flat_block(F, n: int, k: int = 1) -> ExactMatrix:
    """Block-diagonal sigma^k acting on n F-coordinates."""
    S = F.frobenius_matrix(k)
    e = F.e
    out = np.zeros((n * e, n * e), dtype=np.int64)
    for i in range(n):
        out[i * e:(i + 1) * e, i * e:(i + 1) * e] = S
    return ExactMatrix(field_make(F.p), out)


def scramble_with_witness(t: TensorHandle, seed: int):
    """Anonymizing congruence; returns (t', (X, Z)) with the generating pair.

    X in GL(dim_v), Z in GL(dim_t) over GF(p); the new slices are
    X^T (sum_m Z[m,k] C_m) X.  The pair (X, (Z^T)^{-1}) is a pseudo-isometry
    from t' to t.
    """
    F = t.field
    rng = SplitMix64(seed)
    X = random_invertible(F, t.dim_v, rng)
    Z = random_invertible(F, t.dim_t, rng)
    out = np.zeros_like(t.forms)
    for k in range(t.dim_t):
        acc = np.zeros((t.dim_v, t.dim_v), dtype=np.int64)
        for m in range(t.dim_t):
            c = int(Z.a[m, k])
            if c:
                acc = (acc + c * t.forms[m]) % F.p
        out[k] = (X.a.T @ acc @ X.a) % F.p
    return TensorHandle(F, out), (X, Z)


def scramble(t: TensorHandle, seed: int) -> TensorHandle:
    """Seeded anonymizing congruence; records nothing."""
    return scramble_with_witness(t, seed)[0]
