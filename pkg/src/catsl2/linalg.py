"""Exact dense/sparse linear algebra over F_p and Q.

Matrices are numpy arrays: dtype int64 holding values in [0, p) over F_p,
dtype object holding `Fraction`s over Q.  Everything here is plain Gaussian
elimination with exact arithmetic; numpy is used as a container and for
vectorised integer row operations, never as a numerical solver.

Conventions:
  * vectors are 1-d arrays, matrices act on column vectors,
  * `rref` returns the reduced row echelon form and the pivot columns,
  * kernel bases are returned as matrices whose *columns* are basis vectors.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .field import Field, Fp, QQ

_FLOAT_SAFE = 2**52


def zeros(field: Field, m: int, n: int) -> np.ndarray:
    if field.p:
        return np.zeros((m, n), dtype=np.int64)
    out = np.empty((m, n), dtype=object)
    out[:] = Fraction(0)
    return out


def zeros_vec(field: Field, n: int) -> np.ndarray:
    if field.p:
        return np.zeros(n, dtype=np.int64)
    out = np.empty(n, dtype=object)
    out[:] = Fraction(0)
    return out


def eye(field: Field, n: int) -> np.ndarray:
    out = zeros(field, n, n)
    for i in range(n):
        out[i, i] = field.one
    return out


def as_matrix(field: Field, rows) -> np.ndarray:
    """Build a matrix from nested sequences, coercing entries into the field."""
    data = [[field.of(x) for x in row] for row in rows]
    m = len(data)
    n = len(data[0]) if m else 0
    out = zeros(field, m, n)
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def matmul(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if field.p:
        p = field.p
        k = A.shape[1]
        if k == 0:
            return zeros(field, A.shape[0], B.shape[1])
        # exact float64 BLAS path: products are bounded by k * (p-1)^2
        if k * (p - 1) * (p - 1) < _FLOAT_SAFE:
            C = np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
            return C % p
        return (A @ B) % p
    return np.dot(A, B)


def mat_vec(field: Field, A: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matmul(field, A, v.reshape(-1, 1))[:, 0]


def is_zero_matrix(field: Field, A: np.ndarray) -> bool:
    if field.p:
        return not np.any(A % field.p)
    return all(x == 0 for x in A.flat)


def mats_equal(field: Field, A: np.ndarray, B: np.ndarray) -> bool:
    if A.shape != B.shape:
        return False
    return is_zero_matrix(field, A - B) if not field.p else not np.any((A - B) % field.p)


def rref(field: Field, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    if field.p:
        return _rref_fp(field.p, A)
    return _rref_qq(A)


def _rref_fp(p: int, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    R = (A % p).astype(np.int64).copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, c]), p - 2, p)
        if inv != 1:
            R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def _rref_qq(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    R = A.copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        # pick the simplest nonzero pivot to limit coefficient growth
        best, best_size = -1, None
        for i in range(r, m):
            x = R[i, c]
            if x != 0:
                size = max(abs(x.numerator), x.denominator)
                if best_size is None or size < best_size:
                    best, best_size = i, size
        if best < 0:
            continue
        if best != r:
            R[[r, best]] = R[[best, r]]
        piv = R[r, c]
        if piv != 1:
            R[r] = R[r] / piv
        for i in range(m):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(field: Field, A: np.ndarray) -> int:
    if min(A.shape) == 0:
        return 0
    return len(rref(field, A)[1])


def kernel(field: Field, A: np.ndarray) -> np.ndarray:
    """Basis of the right kernel {x : Ax = 0}; columns are basis vectors."""
    m, n = A.shape
    if n == 0:
        return zeros(field, 0, 0)
    if m == 0:
        return eye(field, n)
    R, pivots = rref(field, A)
    free = [c for c in range(n) if c not in pivots]
    K = zeros(field, n, len(free))
    for j, fc in enumerate(free):
        K[fc, j] = field.one
        for i, pc in enumerate(pivots):
            K[pc, j] = field.neg(field.of(R[i, fc]))
    if field.p:
        K %= field.p
    return K


def image_pivots(field: Field, A: np.ndarray) -> list[int]:
    """Indices of a maximal independent set of columns of A."""
    return rref(field, A)[1]


def inv(field: Field, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise ValueError("inv of non-square matrix")
    aug = np.concatenate([A, eye(field, n)], axis=1)
    R, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:, n:]


def solve_right(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray | None:
    """One solution X of A X = B, or None if inconsistent."""
    m, n = A.shape
    if B.ndim == 1:
        X = solve_right(field, A, B.reshape(-1, 1))
        return None if X is None else X[:, 0]
    aug = np.concatenate([A, B], axis=1)
    R, pivots = rref(field, aug)
    if any(c >= n for c in pivots):
        return None
    X = zeros(field, n, B.shape[1])
    for i, c in enumerate(pivots):
        X[c, :] = R[i, n:]
    return X


class ColumnSolver:
    """Solve B x = v repeatedly for a fixed full-column-rank B.

    Selects an invertible square row-submatrix once; `coords(v)` then costs a
    single matrix-vector product.  Vectors must lie in the column span.
    """

    def __init__(self, field: Field, B: np.ndarray):
        self.field = field
        self.B = B
        r = B.shape[1]
        Rt, prows = rref(field, B.T)
        if len(prows) != r:
            raise ValueError("columns are not independent")
        self.rows = prows
        self.Sinv = inv(field, B[prows, :])

    def coords(self, v: np.ndarray) -> np.ndarray:
        return mat_vec(self.field, self.Sinv, v[self.rows])

    def coords_mat(self, V: np.ndarray) -> np.ndarray:
        return matmul(self.field, self.Sinv, V[self.rows, :])


class SpanReducer:
    """Incremental row-space reducer (sparse Gaussian elimination).

    Rows are dicts {column: scalar}.  Each accepted row is normalised so its
    pivot column has coefficient 1 and is fully reduced against the earlier
    pivots.  Used for cokernels of large, sparse relation matrices; the pivot
    choice takes the sparsest admissible column (Markowitz-style tie-break).
    """

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivrows: dict[int, dict[int, object]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivrows)

    def reduce(self, row: dict) -> dict:
        f = self.field
        row = {c: v for c, v in row.items() if not f.is_zero(v)}
        again = True
        while again:
            again = False
            for c in list(row.keys()):
                pr = self.pivrows.get(c)
                if pr is not None:
                    coef = row.pop(c)
                    for c2, v2 in pr.items():
                        if c2 == c:
                            continue
                        nv = f.sub(row.get(c2, f.zero), f.mul(coef, v2))
                        if f.is_zero(nv):
                            row.pop(c2, None)
                        else:
                            row[c2] = nv
                    again = True
        return row

    def add(self, row: dict) -> bool:
        f = self.field
        row = self.reduce(row)
        if not row:
            return False
        piv = min(row, key=lambda c: (self._density(c), c))
        coef_inv = f.inv(row[piv])
        row = {c: f.mul(v, coef_inv) for c, v in row.items()}
        # back-substitute into existing pivot rows
        for pc, pr in self.pivrows.items():
            if piv in pr:
                coef = pr.pop(piv)
                for c2, v2 in row.items():
                    if c2 == piv:
                        continue
                    nv = f.sub(pr.get(c2, f.zero), f.mul(coef, v2))
                    if f.is_zero(nv):
                        pr.pop(c2, None)
                    else:
                        pr[c2] = nv
        self.pivrows[piv] = row
        return True

    def _density(self, c: int) -> int:
        return sum(1 for pr in self.pivrows.values() if c in pr)

    def reduce_dense(self, v: np.ndarray) -> np.ndarray:
        f = self.field
        v = v.copy()
        for c, pr in self.pivrows.items():
            coef = v[c]
            if f.is_zero(coef):
                continue
            for c2, v2 in pr.items():
                v[c2] = f.sub(v[c2], f.mul(coef, v2))
        if f.p:
            v %= f.p
        return v


def dense_rows_to_sparse(field: Field, A: np.ndarray) -> list[dict]:
    rows = []
    for i in range(A.shape[0]):
        row = {}
        for j in range(A.shape[1]):
            if not field.is_zero(A[i, j]):
                row[j] = A[i, j]
        rows.append(row)
    return rows


class Mat:
    """A matrix with an optional sparse view of the same logical object."""

    def __init__(self, field: Field, a: np.ndarray):
        self.field = field
        self.a = a

    @classmethod
    def from_rows(cls, field: Field, rows) -> "Mat":
        return cls(field, as_matrix(field, rows))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def sparse(self) -> list[dict]:
        return dense_rows_to_sparse(self.field, self.a)

    def rank(self) -> int:
        return rank(self.field, self.a)

    def rank_sparse(self) -> int:
        red = SpanReducer(self.field, self.cols)
        for row in self.sparse():
            red.add(row)
        return red.rank

    def __repr__(self):
        return f"Mat({self.field!r}, {self.rows}x{self.cols})"


def rref_report(m: Mat) -> dict:
    """Full row-reduction report: rank, pivots, kernel basis, image basis.

    The kernel basis is exact and satisfies rank + nullity = cols; the image
    basis consists of the pivot columns of the input.
    """
    R, pivots = rref(m.field, m.a)
    K = kernel(m.field, m.a)
    image = m.a[:, pivots] if pivots else zeros(m.field, m.rows, 0)
    assert len(pivots) + K.shape[1] == m.cols
    return {
        "rank": len(pivots),
        "pivots": pivots,
        "rref": R,
        "kernel_basis": K,
        "image_basis": image,
    }
