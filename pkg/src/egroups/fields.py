"""Exact arithmetic in GF(p^e) for odd primes p >= 5.

Field elements are plain integers ("codes") in range(q), q = p^e.  The code
of the element c0 + c1*x + ... + c_{e-1}*x^(e-1), written in the power basis
of the modulus root, is c0 + c1*p + ... + c_{e-1}*p^(e-1).  Integer order on
codes is therefore the frozen element order used for every deterministic
tie-break in the package ("smallest" always means smallest code).

All arithmetic entry points accept ints or numpy integer arrays and
broadcast like numpy ufuncs.  Prime fields (e = 1) use native modular
arithmetic; extensions go through lazily built digit and discrete-log
tables, which keeps memory at O(q * e) and supports q up to ~10^6.
"""

from functools import lru_cache

import numpy as np

from .errors import BadCharacteristic, NotPrime, ReducibleModulus


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict:
    """Prime factorization by trial division, {prime: multiplicity}."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- minimal GF(p)[x] helpers used only for modulus selection/validation --
# (general polynomial arithmetic over any FieldSpec lives in poly.py)


def _ptrim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(f, g, m, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    return _pmod(out, m, p)


def _pmod(f, m, p):
    f = list(f)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    for i in range(len(f) - 1, dm - 1, -1):
        c = f[i]
        if c:
            c = (c * inv_lead) % p
            for j in range(dm + 1):
                f[i - dm + j] = (f[i - dm + j] - c * m[j]) % p
    del f[dm:]
    return _ptrim(f)


def _pgcd(f, g, p):
    f, g = _ptrim(list(f)), _ptrim(list(g))
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _psub(f, g, p):
    out = [0] * max(len(f), len(g), 1)
    for i, c in enumerate(f):
        out[i] = c % p
    for i, c in enumerate(g):
        out[i] = (out[i] - c) % p
    return _ptrim(out)


def _ppowmod(f, n, m, p):
    result = [1]
    base = _pmod(f, m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        n >>= 1
    return result


def _irreducible_mod_p(coeffs, p) -> bool:
    """Rabin test for a monic polynomial over GF(p), coeffs low-to-high."""
    e = len(coeffs) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    x = [0, 1]
    xq = _ppowmod(x, p**e, coeffs, p)
    if _psub(xq, x, p):
        return False
    for ell in factorize(e):
        d = e // ell
        xd = _ppowmod(x, p**d, coeffs, p)
        g = _pgcd(coeffs, _psub(xd, x, p), p)
        if len(g) - 1 != 0:
            return False
    return True


def _default_modulus(p, e):
    """First monic irreducible of degree e, scanning the non-leading
    coefficient vector as a base-p code (lowest code wins)."""
    if e == 1:
        return (0, 1)
    for code in range(p**e):
        coeffs = []
        c = code
        for _ in range(e):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        if _irreducible_mod_p(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldSpec:
    """GF(p^e) with a fixed monic irreducible modulus.

    Instances are immutable and safe to share; tables are built lazily and
    cached.  Use :func:`field_make` to get interned canonical instances.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p in (2, 3):
            raise BadCharacteristic("characteristic 2 and 3 are unsupported")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = _default_modulus(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ReducibleModulus(
                    f"modulus must be monic of degree {e} over GF({p})")
            if not _irreducible_mod_p(list(modulus), p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self.half = (p + 1) // 2  # 1/2 in GF(p), needed by the Baer product
        self._pows = tuple(p**i for i in range(e))
        self._digits = None
        self._exp = None
        self._log = None
        self._inv = None
        self._sqrt = None
        self._is_sq = None
        self._generator = None

    # -- identity / representation -------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e}; mod={list(self.modulus)})"

    def to_json(self):
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj):
        return field_make(obj["p"], obj["e"], tuple(obj["modulus"]))

    # -- coefficient vectors -------------------------------------------

    def digits(self):
        if self._digits is None:
            codes = np.arange(self.q, dtype=np.int64)
            cols = []
            for i in range(self.e):
                cols.append((codes // self._pows[i]) % self.p)
            self._digits = np.stack(cols, axis=1)
        return self._digits

    def of_int(self, n: int) -> int:
        """Code of the image of a plain integer under Z -> GF(p) -> GF(q)."""
        return int(n) % self.p

    def from_coeffs(self, coeffs) -> int:
        return int(sum((int(c) % self.p) * self._pows[i] for i, c in enumerate(coeffs)))

    def to_coeffs(self, code: int):
        c = int(code)
        return [(c // self._pows[i]) % self.p for i in range(self.e)]

    # -- arithmetic ------------------------------------------------------

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            d = self.digits()
            s = (d[np.asarray(a)] + d[np.asarray(b)]) % self.p
            return s @ np.asarray(self._pows)
        return self._add_scalar(int(a), int(b))

    def _add_scalar(self, a, b):
        out = 0
        for i in range(self.e):
            pa = self._pows[i]
            out += (((a // pa) + (b // pa)) % self.p) * pa
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        if isinstance(a, np.ndarray):
            d = self.digits()
            return ((self.p - d[a]) % self.p) @ np.asarray(self._pows)
        out = 0
        a = int(a)
        for i in range(self.e):
            pa = self._pows[i]
            out += ((-(a // pa)) % self.p) * pa
        return out

    def _mul_raw(self, a, b):
        """Scalar product via polynomial multiplication; table bootstrap."""
        da, db = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        m = list(self.modulus)
        for i in range(len(prod) - 1, self.e - 1, -1):
            c = prod[i]
            if c:
                for j in range(self.e + 1):
                    prod[i - self.e + j] = (prod[i - self.e + j] - c * m[j]) % self.p
        return self.from_coeffs(prod[: self.e])

    def _ensure_logs(self):
        if self._exp is not None:
            return
        g = self._find_generator()
        q = self.q
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            log[acc] = i
            acc = self._mul_raw(acc, g)
        assert acc == 1, "generator order mismatch"
        self._exp = exp
        self._log = log
        self._generator = g

    def _order_is_full(self, c):
        for ell in factorize(self.q - 1):
            if self._pow_raw(c, (self.q - 1) // ell) == 1:
                return False
        return True

    def _pow_raw(self, a, n):
        result = 1
        while n:
            if n & 1:
                result = self._mul_raw(result, a)
            a = self._mul_raw(a, a)
            n >>= 1
        return result

    def _find_generator(self):
        for c in range(2, self.q):
            if self._order_is_full(c):
                return c
        raise AssertionError("no generator found")  # unreachable

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            self._ensure_logs()
            a = np.asarray(a)
            b = np.asarray(b)
            out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
            return np.where((a == 0) | (b == 0), 0, out)
        a, b = int(a), int(b)
        if a == 0 or b == 0:
            return 0
        self._ensure_logs()
        return int(self._exp[(int(self._log[a]) + int(self._log[b])) % (self.q - 1)])

    def inv(self, a):
        if isinstance(a, np.ndarray):
            if self._inv is None:
                self._build_inv()
            return self._inv[a]
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        self._ensure_logs()
        return int(self._exp[(self.q - 1 - int(self._log[a])) % (self.q - 1)])

    def _build_inv(self):
        if self.e == 1:
            codes = np.arange(self.q, dtype=np.int64)
            inv = np.ones(self.q, dtype=np.int64)
            base = codes.copy()
            n = self.p - 2
            while n:
                if n & 1:
                    inv = (inv * base) % self.p
                base = (base * base) % self.p
                n >>= 1
            inv[0] = 0
            self._inv = inv
        else:
            self._ensure_logs()
            inv = self._exp[(self.q - 1 - self._log) % (self.q - 1)]
            inv[0] = 0
            self._inv = inv

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_int(self, a, n: int):
        """a^n for a plain integer exponent (n may be negative)."""
        a = int(a)
        if n < 0:
            a = self.inv(a)
            n = -n
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def frobenius(self, a, k: int = 1):
        """x -> x^(p^k), the k-th power of the absolute Frobenius."""
        k %= self.e
        if self.e == 1 or k == 0:
            return a if isinstance(a, np.ndarray) else int(a)
        self._ensure_logs()
        shift = pow(self.p, k, self.q - 1)
        if isinstance(a, np.ndarray):
            out = self._exp[(self._log[a] * shift) % (self.q - 1)]
            return np.where(a == 0, 0, out)
        a = int(a)
        if a == 0:
            return 0
        return int(self._exp[(int(self._log[a]) * shift) % (self.q - 1)])

    def frobenius_matrix(self, k: int = 1) -> np.ndarray:
        """Matrix of x -> x^(p^k) on coefficient vectors (e x e over GF(p))."""
        k %= self.e
        cols = []
        for i in range(self.e):
            img = self.frobenius(self._pows[i] if i > 0 else 1, k)
            cols.append(self.to_coeffs(img))
        return np.array(cols, dtype=np.int64).T

    # -- squares ----------------------------------------------------------

    def _build_sqrt(self):
        codes = np.arange(self.q, dtype=np.int64)
        sq = self.mul(codes, codes)
        root = np.full(self.q, -1, dtype=np.int64)
        # later writes win; iterate descending so the smallest root sticks
        root[sq[::-1]] = codes[::-1]
        self._sqrt = root
        self._is_sq = root >= 0

    def sqrt_all(self, a):
        """All y with y^2 = a, ascending; [] when a is a non-square."""
        if self._sqrt is None:
            self._build_sqrt()
        r = int(self._sqrt[int(a)])
        if r < 0:
            return []
        if a == 0:
            return [0]
        s = self.neg(r)
        return sorted({r, s})

    def is_square_mask(self, a: np.ndarray) -> np.ndarray:
        if self._sqrt is None:
            self._build_sqrt()
        return self._is_sq[a]

    def sqrt_table(self) -> np.ndarray:
        if self._sqrt is None:
            self._build_sqrt()
        return self._sqrt

    # -- multiplicative structure -----------------------------------------

    def generator(self) -> int:
        """Smallest multiplicative generator in code order."""
        self._ensure_logs()
        return self._generator

    def roots_of_unity(self, n: int):
        """All x with x^n = 1, ascending."""
        if n < 1:
            raise ValueError("n must be positive")
        self._ensure_logs()
        g = np.gcd(n, self.q - 1)
        step = (self.q - 1) // g
        return sorted(int(self._exp[(i * step) % (self.q - 1)]) for i in range(g))

    def units(self):
        return range(1, self.q)

    def embed_into(self, bigger: "FieldSpec"):
        """Embedding GF(p^e) -> GF(p^(e*k)), as the image list of all codes.

        Deterministic: the modulus root maps to its smallest root in the
        bigger field.  Returns an int64 array `emb` with emb[x] the image
        of code x.
        """
        if bigger.p != self.p or bigger.e % self.e != 0:
            raise ValueError("no embedding")
        if bigger.e == self.e and bigger.modulus == self.modulus:
            return np.arange(self.q, dtype=np.int64)
        from .poly import UniPoly

        root = None
        f = UniPoly(bigger, [bigger.from_coeffs([c]) for c in self.modulus])
        for r in f.roots():
            root = r
            break
        assert root is not None, "modulus has no root in the extension"
        emb = np.zeros(self.q, dtype=np.int64)
        powers = [1]
        for _ in range(1, self.e):
            powers.append(bigger.mul(powers[-1], root))
        d = self.digits()
        for x in range(self.q):
            acc = 0
            for i in range(self.e):
                c = int(d[x, i])
                if c:
                    acc = bigger.add(acc, bigger.mul(c, powers[i]))
            emb[x] = acc
        return emb


@lru_cache(maxsize=None)
def _interned(p, e, modulus):
    return FieldSpec(p, e, modulus)


def field_make(p: int, e: int = 1, modulus=None) -> FieldSpec:
    """Interned FieldSpec; equal parameters give the identical object."""
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    f = FieldSpec(p, e, modulus)  # full validation
    return _interned(p, e, f.modulus)
