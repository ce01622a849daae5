"""Dense exact linear algebra over a FieldSpec.

Matrices are numpy int64 arrays of element codes paired with their field.
Everything is plain O(n^3) elimination with a deterministic first-nonzero
pivot rule; fields here are small enough that nothing fancier pays off.
"""

import numpy as np

from .errors import SingularTransform
from .fields import FieldSpec


class ExactMatrix:
    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, a):
        self.field = field
        arr = np.asarray(a, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("ExactMatrix must be 2-dimensional")
        self.a = arr % field.q if field.e == 1 else arr

    @staticmethod
    def zeros(field, rows, cols):
        return ExactMatrix(field, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(field, n):
        return ExactMatrix(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def copy(self):
        return ExactMatrix(self.field, self.a.copy())

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.field == other.field
                and self.a.shape == other.a.shape and bool((self.a == other.a).all()))

    def __repr__(self):
        return f"ExactMatrix({self.a.tolist()})"

    def __add__(self, other):
        return ExactMatrix(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other):
        return ExactMatrix(self.field, self.field.sub(self.a, other.a))

    def __neg__(self):
        return ExactMatrix(self.field, self.field.neg(self.a))

    def __matmul__(self, other):
        return ExactMatrix(self.field, mat_mul(self.field, self.a, other.a))

    def scale(self, c):
        return ExactMatrix(self.field, self.field.mul(self.a, np.int64(int(c))))

    @property
    def T(self):
        return ExactMatrix(self.field, self.a.T.copy())

    def to_json(self):
        return [[self.field.to_coeffs(int(v)) for v in row] for row in self.a]

    @staticmethod
    def from_json(field, rows):
        return ExactMatrix(
            field, [[field.from_coeffs(c) for c in row] for row in rows])


def mat_mul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact product of code matrices."""
    if F.e == 1:
        # products stay below 2^63 for p < ~3e9 a row at a time
        return (A.astype(np.int64) @ B.astype(np.int64)) % F.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, k: k + 1], B[k: k + 1, :]))
    return out


def mat_vec(F, A, v):
    return mat_mul(F, A, np.asarray(v, dtype=np.int64).reshape(-1, 1)).reshape(-1)


def rref(m: ExactMatrix):
    """Reduced row-echelon form.

    Returns (R, rank, pivot_cols).  Pivot selection is the first row with a
    nonzero entry in the current column, so the result is deterministic.
    """
    F = m.field
    A = m.a.copy()
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = A[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = F.inv(int(A[r, c]))
        A[r] = F.mul(A[r], np.int64(inv))
        other = np.nonzero(A[:, c])[0]
        other = other[other != r]
        if other.size:
            factors = A[other, c]
            A[other] = F.sub(A[other], F.mul(factors[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return ExactMatrix(F, A), r, pivots


def kernel_basis(m: ExactMatrix):
    """Basis of the right null space, as a list of 1-D code arrays.

    Vectors are indexed by the non-pivot columns in ascending order, with a
    1 in the free position; dim(kernel) + rank = cols.
    """
    F = m.field
    R, rank, pivots = rref(m)
    cols = m.cols
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(int(R.a[i, fcol]))
        basis.append(v)
    return basis


def solve(m: ExactMatrix, b):
    """One solution of m x = b, or None when inconsistent."""
    F = m.field
    rhs = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    if rhs.shape[0] != m.rows:
        raise ValueError("dimension mismatch")
    aug = ExactMatrix(F, np.hstack([m.a, rhs]))
    R, rank, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = np.zeros(m.cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R.a[i, m.cols]
    return x


def rank(m: ExactMatrix) -> int:
    return rref(m)[1]


def inverse(m: ExactMatrix) -> ExactMatrix:
    F = m.field
    n = m.rows
    if m.cols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = ExactMatrix(F, np.hstack([m.a, np.eye(n, dtype=np.int64)]))
    R, rk, pivots = rref(aug)
    if rk < n or pivots[:n] != list(range(n)):
        raise SingularTransform("matrix is not invertible")
    return ExactMatrix(F, R.a[:, n:])


def det(m: ExactMatrix) -> int:
    """Determinant by elimination with row-swap sign tracking."""
    F = m.field
    A = m.a.copy()
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("determinant of a non-square matrix")
    d = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            A[[c, i]] = A[[i, c]]
            d = F.neg(d)
        piv = int(A[c, c])
        d = F.mul(d, piv)
        inv = F.inv(piv)
        below = np.nonzero(A[c + 1:, c])[0] + c + 1
        if below.size:
            factors = F.mul(A[below, c], np.int64(inv))
            A[below] = F.sub(A[below], F.mul(factors[:, None], A[c][None, :]))
    return d


def is_invertible(m: ExactMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def random_matrix(F, rows, cols, rng):
    return ExactMatrix(
        F, np.array([[rng.randint(F.q) for _ in range(cols)] for _ in range(rows)],
                    dtype=np.int64))


def random_invertible(F, n, rng) -> ExactMatrix:
    """Rejection-sample an invertible matrix from the seeded stream."""
    while True:
        m = random_matrix(F, n, n, rng)
        if is_invertible(m):
            return m
