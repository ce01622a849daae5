"""Elliptic curves in short Weierstrass form over GF(q), char >= 5.

Points are affine pairs of codes or the distinguished infinity object; the
identity for the chord-tangent group law is O = (0:1:0).  Point enumeration
order is frozen: O first, then affine points by ascending (x, y) code.
"""

import numpy as np

from .errors import (DescentFailure, NotThreeTorsion, NotTwoTorsion,
                     PointAtInfinity, PointNotOnCurve, SingularCurve)
from .fields import FieldSpec, field_make
from .forms import TernaryCubic, weierstrass_cubic
from .linalg import ExactMatrix, kernel_basis
from .poly import UniPoly


class ECPoint:
    __slots__ = ("inf", "x", "y")

    def __init__(self, x=None, y=None, inf=False):
        self.inf = bool(inf)
        self.x = None if inf else int(x)
        self.y = None if inf else int(y)

    @staticmethod
    def infinity():
        return ECPoint(inf=True)

    def __eq__(self, other):
        if not isinstance(other, ECPoint):
            return NotImplemented
        if self.inf or other.inf:
            return self.inf and other.inf
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.inf, self.x, self.y))

    def __repr__(self):
        return "O" if self.inf else f"({self.x},{self.y})"

    def proj(self):
        """Projective coordinates (x : y : z)."""
        if self.inf:
            return (0, 1, 0)
        return (self.x, self.y, 1)

    def key(self):
        """Sort key for the frozen point order (O first)."""
        return (0, 0, 0) if self.inf else (1, self.x, self.y)

    def to_json(self, field):
        if self.inf:
            return "O"
        return {"x": field.to_coeffs(self.x), "y": field.to_coeffs(self.y)}

    @staticmethod
    def from_json(field, obj):
        if obj == "O":
            return ECPoint.infinity()
        return ECPoint(field.from_coeffs(obj["x"]), field.from_coeffs(obj["y"]))


O = ECPoint.infinity()


class EllipticCurve:
    __slots__ = ("field", "a", "b")

    def __init__(self, field: FieldSpec, a, b):
        F = field
        a, b = int(a), int(b)
        disc = F.add(F.mul(4, F.pow_int(a, 3)), F.mul(F.of_int(27), F.mul(b, b)))
        if disc == 0:
            raise SingularCurve(f"4a^3 + 27b^2 = 0 for a={a}, b={b}")
        self.field = F
        self.a = a
        self.b = b

    def __eq__(self, other):
        return (isinstance(other, EllipticCurve) and self.field == other.field
                and (self.a, self.b) == (other.a, other.b))

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def __repr__(self):
        return f"E(a={self.a}, b={self.b} / {self.field!r})"

    def rhs(self, x):
        F = self.field
        return F.add(F.add(F.pow_int(x, 3), F.mul(self.a, x)), self.b)

    def contains(self, P: ECPoint) -> bool:
        if P.inf:
            return True
        F = self.field
        return F.mul(P.y, P.y) == self.rhs(P.x)

    def check(self, P: ECPoint):
        if not self.contains(P):
            raise PointNotOnCurve(f"{P} not on {self}")

    def neg(self, P: ECPoint) -> ECPoint:
        if P.inf:
            return P
        return ECPoint(P.x, self.field.neg(P.y))

    def add(self, P: ECPoint, Q: ECPoint) -> ECPoint:
        F = self.field
        if P.inf:
            return Q
        if Q.inf:
            return P
        if P.x == Q.x:
            if F.add(P.y, Q.y) == 0:
                return O
            # tangent: slope (3x^2 + a) / (2y)
            num = F.add(F.mul(3, F.mul(P.x, P.x)), self.a)
            den = F.mul(2, P.y)
        else:
            num = F.sub(Q.y, P.y)
            den = F.sub(Q.x, P.x)
        s = F.div(num, den)
        x3 = F.sub(F.sub(F.mul(s, s), P.x), Q.x)
        y3 = F.sub(F.mul(s, F.sub(P.x, x3)), P.y)
        return ECPoint(x3, y3)

    def sub(self, P, Q):
        return self.add(P, self.neg(Q))

    def smul(self, k: int, P: ECPoint) -> ECPoint:
        if k < 0:
            return self.smul(-k, self.neg(P))
        acc = O
        while k:
            if k & 1:
                acc = self.add(acc, P)
            P = self.add(P, P)
            k >>= 1
        return acc

    def points(self):
        """All rational points, O first then ascending (x, y)."""
        F = self.field
        xs = np.arange(F.q, dtype=np.int64)
        rhs = F.add(F.add(F.mul(F.mul(xs, xs), xs), F.mul(np.int64(self.a), xs)),
                    np.int64(self.b))
        root = F.sqrt_table()[rhs]
        out = [O]
        for x in range(F.q):
            r = int(root[x])
            if r < 0:
                continue
            if r == 0:
                out.append(ECPoint(x, 0))
            else:
                s = F.neg(r)
                out.append(ECPoint(x, min(r, s)))
                out.append(ECPoint(x, max(r, s)))
        return out

    def order(self):
        return len(self.points())

    def affine_points(self):
        return self.points()[1:]

    def torsion(self, m: int):
        """E[2](F) or E[3](F) including O."""
        F = self.field
        if m == 2:
            f = UniPoly(F, [self.b, self.a, 0, 1])
            return [O] + [ECPoint(r, 0) for r in f.roots()]
        if m == 3:
            # 3-division polynomial 3x^4 + 6a x^2 + 12b x - a^2
            psi = UniPoly(F, [F.neg(F.mul(self.a, self.a)), F.mul(F.of_int(12), self.b),
                              F.mul(F.of_int(6), self.a), 0, 3])
            pts = [O]
            for lam in psi.roots():
                for mu in F.sqrt_all(self.rhs(lam)):
                    if mu != 0:
                        pts.append(ECPoint(lam, mu))
            return sorted(pts, key=ECPoint.key)
        raise ValueError("torsion implemented for m in {2, 3}")

    def j_invariant(self):
        F = self.field
        a3 = F.mul(4, F.pow_int(self.a, 3))
        return F.div(F.mul(F.of_int(1728), a3),
                     F.add(a3, F.mul(F.of_int(27), F.mul(self.b, self.b))))

    def aut_O(self):
        """Curve automorphisms as (omega, diag(omega^2, omega^3, 1)) pairs."""
        F = self.field
        if self.a == 0:
            n = 6
        elif self.b == 0:
            n = 4
        else:
            n = 2
        out = []
        for w in F.roots_of_unity(n):
            m = ExactMatrix(F, np.diag([F.mul(w, w), F.pow_int(w, 3), 1])
                            .astype(np.int64))
            out.append((w, m))
        return out

    def orbit_of_point(self, P: ECPoint):
        """Orbit of P under (x, y) -> (w^2 x, w^3 y)."""
        self.check(P)
        F = self.field
        if P.inf:
            return [P]
        orbit = {ECPoint(F.mul(F.mul(w, w), P.x), F.mul(F.pow_int(w, 3), P.y))
                 for w, _ in self.aut_O()}
        return sorted(orbit, key=ECPoint.key)

    def cubic(self) -> TernaryCubic:
        """Homogenized curve equation y1^3 + a y1 y3^2 + b y3^3 - y2^2 y3."""
        return weierstrass_cubic(self.field, self.a, self.b)

    def galois_image(self, k: int):
        """(sigma^k E, .) with sigma the absolute Frobenius."""
        F = self.field
        return EllipticCurve(F, F.frobenius(self.a, k), F.frobenius(self.b, k))

    def galois_point(self, P: ECPoint, k: int) -> ECPoint:
        if P.inf:
            return P
        F = self.field
        return ECPoint(F.frobenius(P.x, k), F.frobenius(P.y, k))

    def to_json(self):
        F = self.field
        return {"field": F.to_json(), "a": F.to_coeffs(self.a),
                "b": F.to_coeffs(self.b)}

    @staticmethod
    def from_json(obj):
        F = FieldSpec.from_json(obj["field"])
        return EllipticCurve(F, F.from_coeffs(obj["a"]), F.from_coeffs(obj["b"]))


def curve_make(field, a, b) -> EllipticCurve:
    return EllipticCurve(field, a, b)


class CurveIso:
    """(x, y) -> (u^2 sigma^k(x), u^3 sigma^k(y)) as curve-with-point data."""

    __slots__ = ("u", "sigma_power")

    def __init__(self, u, sigma_power):
        self.u = int(u)
        self.sigma_power = int(sigma_power)

    def __repr__(self):
        return f"CurveIso(u={self.u}, sigma^{self.sigma_power})"


def iso_with_point(E: EllipticCurve, P: ECPoint, E2: EllipticCurve,
                   P2: ECPoint, sigma_power: int = 0):
    """Search u in F* with (a2, b2, x2, y2) = (u^4 s(a), u^6 s(b), u^2 s(x), u^3 s(y)).

    s = Frobenius^sigma_power.  Returns a CurveIso or None; O(q) scan.
    """
    if P.inf or P2.inf:
        raise PointAtInfinity("iso_with_point requires affine points")
    F = E.field
    sa = F.frobenius(E.a, sigma_power)
    sb = F.frobenius(E.b, sigma_power)
    sx = F.frobenius(P.x, sigma_power)
    sy = F.frobenius(P.y, sigma_power)
    for u in F.units():
        u2 = F.mul(u, u)
        u3 = F.mul(u2, u)
        if (F.mul(u2, sx) == P2.x and F.mul(u3, sy) == P2.y
                and F.mul(F.mul(u2, u2), sa) == E2.a
                and F.mul(F.mul(u3, u3), sb) == E2.b):
            return CurveIso(u, sigma_power)
    return None


def iso_with_point_closed_form(E, P, E2, P2, sigma_power=0):
    """Cross-check oracle using the j-invariant case split instead of a scan.

    Candidate u's are cut down to the solutions of u^4 = a2/s(a) or
    u^6 = b2/s(b) (or both), then filtered on the point condition.
    """
    if P.inf or P2.inf:
        raise PointAtInfinity("iso_with_point requires affine points")
    F = E.field
    sa = F.frobenius(E.a, sigma_power)
    sb = F.frobenius(E.b, sigma_power)
    if (sa == 0) != (E2.a == 0) or (sb == 0) != (E2.b == 0):
        return None
    cands = []
    if sa == 0:  # j = 0
        val = F.div(E2.b, sb)
        base = _nth_root(F, val, 6)
        if base is None:
            return None
        cands = [F.mul(base, w) for w in F.roots_of_unity(6)]
    elif sb == 0:  # j = 1728
        val = F.div(E2.a, sa)
        base = _nth_root(F, val, 4)
        if base is None:
            return None
        cands = [F.mul(base, w) for w in F.roots_of_unity(4)]
    else:
        u2 = F.div(F.div(E2.b, sb), F.div(E2.a, sa))
        cands = F.sqrt_all(u2)
    sx = F.frobenius(P.x, sigma_power)
    sy = F.frobenius(P.y, sigma_power)
    for u in sorted(set(cands)):
        if u == 0:
            continue
        u2 = F.mul(u, u)
        u3 = F.mul(u2, u)
        if (F.mul(u2, sx) == P2.x and F.mul(u3, sy) == P2.y
                and F.mul(F.mul(u2, u2), sa) == E2.a
                and F.mul(F.mul(u3, u3), sb) == E2.b):
            return CurveIso(u, sigma_power)
    return None


def _nth_root(F, val, n):
    if val == 0:
        return 0
    F._ensure_logs()
    L = int(F._log[val])
    g = int(np.gcd(n, F.q - 1))
    if L % g:
        return None
    # solve n*t = L mod q-1
    n_, m = n // g, (F.q - 1) // g
    t = (L // g) * pow(n_, -1, m) % m
    return int(F._exp[t % (F.q - 1)])


def galois_group_EP(E: EllipticCurve, P: ECPoint):
    """Subgroup of Z/e of Frobenius powers k with (E,P) ~ (s^k E, s^k P).

    k qualifies when some u relates (a, b, x, y) to its k-fold Frobenius
    twist, i.e. iso_with_point(E, P, E, P, k) succeeds; that is exactly the
    existence of a curve isomorphism s^k E -> E carrying s^k P to P.
    """
    if P.inf:
        raise PointAtInfinity("requires an affine point")
    F = E.field
    out = []
    for k in range(F.e):
        if iso_with_point(E, P, E, P, k) is not None:
            out.append(k)
    return out


def _extend_curve(E: EllipticCurve, k: int):
    """E over GF(q^k) along the canonical embedding; returns (curve, emb)."""
    F = E.field
    L = field_make(F.p, F.e * k)
    emb = F.embed_into(L)
    return EllipticCurve(L, int(emb[E.a]), int(emb[E.b])), emb


def translation_matrix(E: EllipticCurve, Q: ECPoint) -> ExactMatrix:
    """3x3 matrix of the linear map on P^2 induced by translation by Q in E[3].

    Solved from point correspondences R -> R + Q (rational points first,
    quadratic/cubic extension points when the rational supply is too thin),
    normalized so the first nonzero entry is 1, then checked to descend to
    the base field and to satisfy g . R ~ (R + Q) projectively on every
    rational point.
    """
    F = E.field
    if Q.inf or E.smul(3, Q) != O or not E.contains(Q):
        raise NotThreeTorsion(f"{Q} is not a nontrivial rational 3-torsion point")

    for ext in (1, 2, 3):
        if ext == 1:
            EL, emb = E, np.arange(F.q, dtype=np.int64)
            L = F
        else:
            EL, emb = _extend_curve(E, ext)
            L = EL.field
        QL = ECPoint(int(emb[Q.x]), int(emb[Q.y]))
        pts = EL.points()
        rows = []
        count = 0
        for R in pts:
            S = EL.add(R, QL)
            r = R.proj()
            s = S.proj()
            for (i, j) in ((0, 1), (0, 2), (1, 2)):
                # (g r)[i] s[j] - (g r)[j] s[i] = 0, linear in the 9 entries
                row = np.zeros(9, dtype=np.int64)
                for c in range(3):
                    row[3 * i + c] = L.mul(r[c], s[j])
                    row[3 * j + c] = L.neg(L.mul(r[c], s[i]))
                rows.append(row)
            count += 1
            if count >= 40:
                break
        ker = kernel_basis(ExactMatrix(L, np.array(rows, dtype=np.int64)))
        if len(ker) != 1:
            continue
        g = ker[0].reshape(3, 3)
        nz = g.reshape(-1)
        first = int(nz[np.nonzero(nz)[0][0]])
        g = L.mul(g, np.int64(L.inv(first)))
        if ext > 1:
            # descend: all entries must be fixed by the relative Frobenius
            if not all(L.pow_int(int(v), F.q) == int(v) for v in g.reshape(-1)):
                raise DescentFailure("translation matrix does not descend")
            back = {int(emb[x]): x for x in range(F.q)}
            g = np.array([[back[int(v)] for v in row] for row in g],
                         dtype=np.int64)
        gm = ExactMatrix(F, g)
        _verify_translation(E, Q, gm)
        return gm
    raise DescentFailure("could not pin down the translation matrix")


def _verify_translation(E, Q, g: ExactMatrix):
    F = E.field
    for R in E.points():
        r = np.array(R.proj(), dtype=np.int64)
        img = F.add(F.add(F.mul(g.a[:, 0], r[0]), F.mul(g.a[:, 1], r[1])),
                    F.mul(g.a[:, 2], r[2]))
        s = np.array(E.add(R, Q).proj(), dtype=np.int64)
        # img ~ s projectively
        cross = [F.sub(F.mul(int(img[i]), int(s[j])), F.mul(int(img[j]), int(s[i])))
                 for (i, j) in ((0, 1), (0, 2), (1, 2))]
        if any(cross):
            raise DescentFailure("translation matrix fails on a rational point")
