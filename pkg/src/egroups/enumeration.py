"""Batch experiments: isomorphism-class counts, adjoint survey, timings.

count_iso_classes enumerates every (a, b, P) with 4a^3+27b^2 != 0 and P
affine on y^2 = x^3+ax+b, then collapses the list under u-scaling
(u^4 a, u^6 b, u^2 x, u^3 y) and coefficientwise Frobenius.  The default
engine packs each tuple into a base-q integer and takes vectorized orbit
minima ("dedup"); a plain union-find engine is kept as an independent
cross-check.

The adjoint survey replays the sampling protocol for random skew 6x6
matrices of linear forms: coefficients uniform from the seeded stream, a
matrix is kept when its Pfaffian cubic is smooth, and the kept matrix is
classified by the star type of its adjoint algebra.  The "orthogonal"
fraction reported for plots combines the two classes whose semisimple part
is a rank-1 orthogonal algebra.
"""

import time
from multiprocessing import Pool

import numpy as np

from .egroup import b_matrix, flatten_to_prime, scramble
from .fields import factorize, field_make
from .forms import LinearFormMatrix, is_smooth, pfaffian6
from .pipeline import canonical_key, iso_coset, recognize
from .rng import MASK64, SplitMix64
from .tensor import StarType, TensorHandle, adjoint, star_type


def _field_for_q(q):
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, e = next(iter(fac.items()))
    return field_make(p, e)


def _valid_triples(F):
    """Arrays (a, b, lam, mu) over all curves and affine points."""
    q = F.q
    codes = np.arange(q, dtype=np.int64)
    A, B = np.meshgrid(codes, codes, indexing="ij")
    A = A.ravel()
    B = B.ravel()
    a3 = F.mul(F.mul(A, A), A)
    disc = F.add(F.mul(np.int64(F.of_int(4)), a3),
                 F.mul(np.int64(F.of_int(27)), F.mul(B, B)))
    keep = disc != 0
    A, B = A[keep], B[keep]
    root = F.sqrt_table()
    out_a, out_b, out_l, out_m = [], [], [], []
    xs = np.arange(q, dtype=np.int64)
    x3 = F.mul(F.mul(xs, xs), xs)
    for a, b in zip(A, B):
        rhs = F.add(F.add(x3, F.mul(np.int64(a), xs)), np.int64(b))
        r = root[rhs]
        has = r >= 0
        lam = xs[has]
        mu = r[has]
        pos = mu != 0
        # mu = 0 gives one point, otherwise two
        la = np.concatenate([lam, lam[pos]])
        ma = np.concatenate([mu, F.neg(mu[pos])])
        out_a.append(np.full(la.shape, a, dtype=np.int64))
        out_b.append(np.full(la.shape, b, dtype=np.int64))
        out_l.append(la)
        out_m.append(ma)
    return (np.concatenate(out_a), np.concatenate(out_b),
            np.concatenate(out_l), np.concatenate(out_m))


def _orbit_min_keys(F, A, B, L, M):
    """Packed canonical key of each triple under u-scaling and Frobenius."""
    q = np.int64(F.q)
    best = None
    for k in range(F.e):
        sa, sb = F.frobenius(A, k), F.frobenius(B, k)
        sl, sm = F.frobenius(L, k), F.frobenius(M, k)
        for u in F.units():
            u2 = F.mul(u, u)
            u3 = F.mul(u2, u)
            u4 = F.mul(u2, u2)
            u6 = F.mul(u3, u3)
            packed = (F.mul(np.int64(u4), sa) * q + F.mul(np.int64(u6), sb))
            packed = packed * q + F.mul(np.int64(u2), sl)
            packed = packed * q + F.mul(np.int64(u3), sm)
            best = packed if best is None else np.minimum(best, packed)
    return best


class ClassCount:
    __slots__ = ("q", "n_classes", "keys", "orbit_sizes", "wall_time")

    def __init__(self, q, keys, orbit_sizes, wall_time):
        self.q = q
        self.n_classes = len(keys)
        self.keys = keys
        self.orbit_sizes = orbit_sizes
        self.wall_time = wall_time

    def representatives(self, F):
        q = self.q
        out = []
        for packed in self.keys:
            m = packed % q
            l = (packed // q) % q
            b = (packed // (q * q)) % q
            a = packed // (q * q * q)
            out.append((int(a), int(b), int(l), int(m)))
        return out

    def to_json(self):
        return {"q": self.q, "N_q": self.n_classes,
                "wall_time_s": round(self.wall_time, 3)}


def count_iso_classes(q, engine="dedup") -> ClassCount:
    """Number of isomorphism classes N_q with orbit bookkeeping."""
    start = time.time()
    F = _field_for_q(q)
    A, B, L, M = _valid_triples(F)
    if engine == "dedup":
        keys = _orbit_min_keys(F, A, B, L, M)
        uniq, counts = np.unique(keys, return_counts=True)
        assert int(counts.sum()) == len(A)
        return ClassCount(q, [int(x) for x in uniq],
                          [int(c) for c in counts], time.time() - start)
    if engine == "unionfind":
        return _count_union_find(F, A, B, L, M, start)
    raise ValueError(f"unknown engine {engine}")


def _count_union_find(F, A, B, L, M, start):
    q = F.q
    packed = ((A * q + B) * q + L) * q + M
    index = {int(x): i for i, x in enumerate(packed)}
    parent = list(range(len(packed)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    u0 = F.generator()
    u2 = F.mul(u0, u0)
    u3 = F.mul(u2, u0)
    u4 = F.mul(u2, u2)
    u6 = F.mul(u3, u3)
    for i in range(len(packed)):
        a, b, l, m = int(A[i]), int(B[i]), int(L[i]), int(M[i])
        ja = ((F.mul(u4, a) * q + F.mul(u6, b)) * q + F.mul(u2, l)) * q + F.mul(u3, m)
        union(i, index[int(ja)])
        if F.e > 1:
            fa = ((F.frobenius(a, 1) * q + F.frobenius(b, 1)) * q
                  + F.frobenius(l, 1)) * q + F.frobenius(m, 1)
            union(i, index[int(fa)])
    roots = {}
    for i in range(len(packed)):
        roots.setdefault(find(i), 0)
        roots[find(i)] += 1
    keys = sorted(int(packed[r]) for r in roots)
    sizes = [roots[r] for r in sorted(roots, key=lambda r: int(packed[r]))]
    return ClassCount(F.q, keys, sizes, time.time() - start)


# -- adjoint survey -------------------------------------------------------------


SURVEY_TYPES = (StarType.EXCHANGE, StarType.UNITARY1, StarType.ORTHOGONAL1,
                StarType.LOCAL_ORTHOGONAL, StarType.SYMPLECTIC2, StarType.OTHER)


class SurveyRow:
    __slots__ = ("p", "samples", "seed", "counts", "attempts", "wall_time")

    def __init__(self, p, samples, seed, counts, attempts, wall_time):
        self.p = p
        self.samples = samples
        self.seed = seed
        self.counts = counts
        self.attempts = attempts
        self.wall_time = wall_time

    def fraction(self, kind):
        return self.counts.get(kind, 0) / self.samples

    @property
    def orthogonal_fraction(self):
        """Semisimple-orthogonal fraction, as plotted: O1 plus K x| O1."""
        return (self.counts.get(StarType.ORTHOGONAL1, 0)
                + self.counts.get(StarType.LOCAL_ORTHOGONAL, 0)) / self.samples

    def to_json(self):
        return {"p": self.p, "samples": self.samples, "seed": self.seed,
                "counts": dict(self.counts),
                "fractions": {
                    "exchange": self.fraction(StarType.EXCHANGE),
                    "unitary": self.fraction(StarType.UNITARY1),
                    "orthogonal": self.orthogonal_fraction,
                    "symplectic": self.fraction(StarType.SYMPLECTIC2),
                },
                "attempts": self.attempts,
                "wall_time_s": round(self.wall_time, 3)}


def _random_skew_lfm(F, rng):
    S = np.zeros((3, 6, 6), dtype=np.int64)
    for i in range(6):
        for j in range(i + 1, 6):
            for k in range(3):
                c = rng.randint(F.q)
                S[k, i, j] = c
                S[k, j, i] = F.neg(c)
    return LinearFormMatrix(F, S)


def _sample_seed(seed, i):
    return (seed ^ (i * 0x9E3779B97F4A7C15 + 0x1234567)) & MASK64


def _survey_one(args):
    p, seed, i = args
    F = field_make(p)
    rng = SplitMix64(_sample_seed(seed, i))
    attempts = 0
    while True:
        attempts += 1
        B = _random_skew_lfm(F, rng)
        pf = pfaffian6(B)
        if pf.is_zero() or not is_smooth(pf):
            continue
        A = adjoint(B, check_closure=False)
        st = star_type(A, seed=_sample_seed(seed, i) & 0x7FFFFFFF)
        return st.kind, attempts


def adjoint_survey(p, samples, seed=0, jobs=1) -> SurveyRow:
    """Star-type tally over `samples` accepted random skew matrices.

    Acceptance: the Pfaffian cubic is smooth (nonzero discriminant).  Each
    sample owns an independent seeded stream, so the tally is identical for
    any job count.
    """
    start = time.time()
    tasks = [(p, seed, i) for i in range(samples)]
    if jobs > 1:
        with Pool(jobs) as pool:
            results = pool.map(_survey_one, tasks, chunksize=16)
    else:
        results = [_survey_one(t) for t in tasks]
    counts = {}
    attempts = 0
    for kind, att in results:
        counts[kind] = counts.get(kind, 0) + 1
        attempts += att
    return SurveyRow(p, samples, seed, counts, attempts, time.time() - start)


# -- timing harness --------------------------------------------------------------


def timing_harness(q_list, seed=0, instances=3):
    """Median recognize/isotest wall times per q, as CSV-ready rows.

    Each instance draws a random valid (a, b) and affine P, scrambles the
    flattened tensor, and times recognize() on the scramble and iso_coset()
    between source and scramble.
    """
    rows = []
    for q in q_list:
        F = _field_for_q(q)
        rec_times, iso_times = [], []
        rng = SplitMix64(seed ^ q)
        for inst in range(instances):
            E = None
            while E is None:
                a = rng.randint(F.q)
                b = rng.randint(F.q)
                try:
                    from .ecurve import EllipticCurve
                    E = EllipticCurve(F, a, b)
                except Exception:
                    E = None
            pts = E.affine_points()
            P = pts[rng.randint(len(pts))]
            t = flatten_to_prime(b_matrix(E, P))
            ts = scramble(t, rng.next_u64() & 0x7FFFFFFF)
            t0 = time.time()
            rep = recognize(ts)
            rec_times.append((time.time() - t0) * 1000)
            assert rep.ok
            t0 = time.time()
            cos = iso_coset(t, ts)
            iso_times.append((time.time() - t0) * 1000)
            assert cos is not None
        rows.append((q, float(np.median(rec_times)), float(np.median(iso_times))))
    return rows


TIMING_CSV_HEADER = "q,recognize_ms,isotest_ms"


def timing_rows_to_csv(rows):
    lines = [TIMING_CSV_HEADER]
    for q, r, i in rows:
        lines.append(f"{q},{r:.3f},{i:.3f}")
    return "\n".join(lines) + "\n"
