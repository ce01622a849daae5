"""Dense univariate polynomials over a FieldSpec, with factorization.

Factorization is the classical squarefree / distinct-degree / equal-degree
chain (Cantor-Zassenhaus).  The equal-degree split draws its random probes
from a SplitMix64 stream, so a fixed seed replays the identical run.
Degrees in this package stay tiny (<= 6), so no asymptotic tricks are used.
"""

import numpy as np

from .errors import ZeroPolynomial
from .fields import FieldSpec
from .rng import SplitMix64


class UniPoly:
    """Coefficients low-to-high, trailing zeros trimmed; () is the zero poly."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs):
        self.field = field
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @staticmethod
    def zero(field):
        return UniPoly(field, [])

    @staticmethod
    def one(field):
        return UniPoly(field, [1])

    @staticmethod
    def x(field):
        return UniPoly(field, [0, 1])

    @staticmethod
    def from_roots(field, roots):
        f = UniPoly.one(field)
        for r in roots:
            f = f * UniPoly(field, [field.neg(r), 1])
        return f

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"

    def __add__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return UniPoly(F, [F.add(x, y) for x, y in zip(a, b)])

    def __sub__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return UniPoly(F, [F.sub(x, y) for x, y in zip(a, b)])

    def __neg__(self):
        return UniPoly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        F = self.field
        if isinstance(other, int):
            return UniPoly(F, [F.mul(c, other) for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return UniPoly(F, out)

    __rmul__ = __mul__

    def divmod(self, other):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly.zero(F), self
        quot = [0] * (dq + 1)
        inv_lead = F.inv(other.lead())
        for i in range(dq, -1, -1):
            top = rem[i + other.degree]
            if top:
                c = F.mul(top, inv_lead)
                quot[i] = c
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = F.sub(rem[i + j], F.mul(c, b))
        return UniPoly(F, quot), UniPoly(F, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            return self
        return self * self.field.inv(self.lead())

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def pow_mod(self, n: int, mod: "UniPoly"):
        F = self.field
        result = UniPoly.one(F)
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def derivative(self):
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(F.mul(i % F.p, self.coeffs[i]))
        return UniPoly(F, out)

    def eval(self, x):
        """Horner evaluation; x may be an int code or a numpy code array."""
        F = self.field
        if isinstance(x, np.ndarray):
            acc = np.zeros_like(x)
            for c in reversed(self.coeffs):
                acc = F.add(F.mul(acc, x), np.int64(c))
            return acc
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def roots(self):
        """All roots in the base field, ascending, ignoring multiplicity."""
        F = self.field
        if self.is_zero():
            raise ZeroPolynomial("every element is a root of 0")
        vals = self.eval(np.arange(F.q, dtype=np.int64))
        return [int(r) for r in np.nonzero(vals == 0)[0]]

    # -- factorization ---------------------------------------------------

    def _pth_root_coeff(self, c):
        # c^(p^(e-1)) is the p-th root of c in GF(p^e)
        return self.field.frobenius(c, (self.field.e - 1) % max(self.field.e, 1))

    def squarefree_decomposition(self):
        """Squarefree decomposition; returns [(g, m)] with f = lead * prod g^m."""
        F = self.field
        f = self.monic()
        if f.degree <= 0:
            return []
        out = []
        g = f.gcd(f.derivative())
        w = f // g
        i = 1
        while w.degree > 0:
            y = w.gcd(g)
            z = w // y
            if z.degree > 0:
                out.append((z.monic(), i))
            w = y
            g = g // y
            i += 1
        if g.degree > 0:
            # g = h(x^p): pull out the p-th root, multiplicities scale by p
            inner = UniPoly(F, [self._pth_root_coeff(c) for c in g.coeffs[:: F.p]])
            for h, m in inner.squarefree_decomposition():
                out.append((h, m * F.p))
        return out

    def distinct_degree_factorization(self):
        """For squarefree monic f: [(product of irreducibles of degree d, d)]."""
        F = self.field
        f = self.monic()
        out = []
        x = UniPoly.x(F)
        h = x
        d = 0
        while f.degree > 2 * (d + 1) - 1 and f.degree > 0:
            d += 1
            h = h.pow_mod(F.q, f)
            g = f.gcd(h - x)
            if g.degree > 0:
                out.append((g, d))
                f = f // g
                h = h % f
        if f.degree > 0:
            out.append((f, f.degree))
        return out

    def equal_degree_split(self, d: int, rng: SplitMix64):
        """Cantor-Zassenhaus split of a squarefree product of degree-d primes."""
        F = self.field
        f = self.monic()
        if f.degree == d:
            return [f]
        exponent = (F.q**d - 1) // 2
        while True:
            probe = UniPoly(F, [rng.randint(F.q) for _ in range(f.degree)])
            if probe.degree < 1:
                continue
            g = f.gcd(probe)
            if 0 < g.degree < f.degree:
                pass  # lucky gcd split
            else:
                h = probe.pow_mod(exponent, f) - UniPoly.one(F)
                g = f.gcd(h)
                if g.degree == 0 or g.degree == f.degree:
                    continue
            left = g.equal_degree_split(d, rng)
            right = (f // g).equal_degree_split(d, rng)
            return left + right

    def factor(self, seed: int = 0):
        """Full factorization into monic irreducibles.

        Returns a list of (UniPoly, multiplicity) sorted by (degree, coeffs);
        the product of the factors times lead() reproduces self exactly.
        """
        if self.is_zero():
            raise ZeroPolynomial("cannot factor the zero polynomial")
        if self.degree == 0:
            return []
        rng = SplitMix64(seed)
        out = {}
        for g, mult in self.squarefree_decomposition():
            for h, d in g.distinct_degree_factorization():
                for irr in h.equal_degree_split(d, rng):
                    key = irr.coeffs
                    out[key] = out.get(key, 0) + mult
        factors = [(UniPoly(self.field, list(k)), m) for k, m in out.items()]
        factors.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
        return factors

    def is_irreducible(self, seed: int = 0):
        if self.degree < 1:
            return False
        if self.degree == 1:
            return True
        if self.degree <= 3:
            return not self.roots()  # cubics/quadratics: no root == irreducible
        f = self.factor(seed)
        return len(f) == 1 and f[0][1] == 1


def factor_univariate(f: UniPoly, seed: int = 0):
    """Module-level alias for UniPoly.factor."""
    return f.factor(seed)
