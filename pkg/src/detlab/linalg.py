"""Exact determinants, row Gramians, elementary column transforms and bound formulas.

Determinants never touch floating point.  Bounds are analytic reals and are
returned as :class:`BoundValue` (a double plus the formula that produced it).
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, DomainError
from .matrix import ExactMatrix

# one-sided relative slack used whenever an exact determinant is compared to a real bound
BOUND_RTOL = 1e-9


@dataclass(frozen=True)
class BoundValue:
    value: float
    formula_tag: str

    def __post_init__(self):
        if not self.value >= 0:
            raise DomainError(f"bound value must be non-negative, got {self.value}")

    def admits(self, abs_det) -> bool:
        """True if ``abs_det`` does not exceed the bound (with the one-sided guard)."""
        return abs_det <= self.value * (1 + BOUND_RTOL) + BOUND_RTOL

    def __float__(self):
        return self.value


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant of a square integer matrix.

    ``a`` is consumed (rows are overwritten).  All intermediate values are
    exact integers because every division in Bareiss' recurrence is exact.
    """
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        rowk = a[k]
        if rowk[k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    rowk = a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = rowk[k]
        tail = rowk[k + 1 :]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            if aik:
                ai[k + 1 :] = [(akk * x - aik * y) // prev for x, y in zip(ai[k + 1 :], tail)]
            elif akk != prev:
                ai[k + 1 :] = [akk * x // prev for x in ai[k + 1 :]]
        prev = akk
    return sign * a[n - 1][n - 1]


def batch_bareiss_det(stack) -> list[int]:
    """Exact determinants of a stack of small integer matrices (shape N x m x m).

    Vectorized Bareiss without pivoting in int64.  Matrices that meet a zero
    pivot are recomputed one by one with :func:`bareiss_det`.  Refuses input
    whose Hadamard bound does not fit comfortably in 64 bits, since every
    intermediate value is a minor of the input.
    """
    import numpy as np

    a = np.array(stack, dtype=np.int64)
    if a.ndim == 2 and a.shape[1] == 0:
        return [1] * a.shape[0]  # stack of 0 x 0 matrices
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise DimensionError("expected a stack of square matrices")
    N, m, _ = a.shape
    if N == 0:
        return []
    norms = np.sqrt((a.astype(np.float64) ** 2).sum(axis=2)).prod(axis=1)
    if float(norms.max()) >= 2.0**60:
        raise DomainError("entries too large for the int64 batch path")
    orig = a.copy()
    bad = np.zeros(N, dtype=bool)
    prev = np.ones(N, dtype=np.int64)
    for k in range(m - 1):
        akk = a[:, k, k].copy()
        bad |= akk == 0
        safe_prev = np.where(bad, 1, prev)
        piv = np.where(bad, 1, akk)
        sub = a[:, k + 1 :, k + 1 :]
        outer = a[:, k + 1 :, k : k + 1] * a[:, k : k + 1, k + 1 :]
        a[:, k + 1 :, k + 1 :] = (piv[:, None, None] * sub - outer) // safe_prev[:, None, None]
        prev = piv
    out = a[:, m - 1, m - 1].tolist()
    for i in np.flatnonzero(bad).tolist():
        out[i] = bareiss_det(orig[i].tolist())
    return out


def _gauss_det(a: list[list]) -> Fraction:
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        akk = Fraction(a[k][k])
        det *= akk
        rowk = a[k]
        for i in range(k + 1, n):
            f = a[i][k] / akk
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], rowk)]
    return det


def det_exact(M: ExactMatrix):
    """Exact determinant; integer input gives an ``int``, rational input a ``Fraction``."""
    if not M.is_square:
        raise DimensionError(f"determinant of non-square {M.nrows}x{M.ncols} matrix")
    if M.is_integer:
        return bareiss_det([list(r) for r in M.rows])
    d = _gauss_det([list(r) for r in M.rows])
    return d.numerator if d.denominator == 1 else d


def row_gram(M: ExactMatrix) -> ExactMatrix:
    """Gram matrix of the rows: entry (i, j) is <row i, row j>."""
    rows = M.rows
    m = len(rows)
    g = [[0] * m for _ in range(m)]
    for i in range(m):
        ri = rows[i]
        gi = g[i]
        for j in range(i, m):
            s = sum(map(operator.mul, ri, rows[j]))
            gi[j] = s
            g[j][i] = s
    if M.is_integer:
        return ExactMatrix.from_ints(g)
    return ExactMatrix(g, ncols=m)


def gram_determinant(M: ExactMatrix):
    """det(row_gram(M)) -- the squared volume spanned by the rows of M."""
    return det_exact(row_gram(M))


def squared_norm(row: Sequence):
    return sum(v * v for v in row)


def hadamard_row_bound(M: ExactMatrix) -> BoundValue:
    if not M.is_square:
        raise DimensionError("Hadamard bound needs a square matrix")
    prod = 1.0
    for r in M.rows:
        prod *= math.sqrt(float(squared_norm(r)))
    return BoundValue(prod, "hadamard: prod_i ||row_i||_2")


@dataclass(frozen=True)
class RyserParams:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("Ryser's bound needs n >= 2")
        if not 1 <= self.k or 2 * self.k > self.n + 1:
            raise DomainError(f"Ryser's bound needs 1 <= k <= (n+1)/2, got n={self.n}, k={self.k}")

    @property
    def lam(self) -> Fraction:
        return Fraction(self.k * (self.k - 1), self.n - 1)


def ryser_bound(p: RyserParams) -> BoundValue:
    value = p.k * float(p.k - p.lam) ** ((p.n - 1) / 2)
    return BoundValue(value, f"ryser: k(k-lambda)^((n-1)/2), n={p.n}, k={p.k}, lambda={p.lam}")


def prop01_bound(n: int, t: int) -> BoundValue:
    """(t/n)^(n/2) for an n x n {-1,0,1} matrix with t non-zero entries."""
    if n <= 0:
        raise DomainError("n must be positive")
    if t < 0:
        raise DomainError("t must be non-negative")
    return BoundValue((t / n) ** (n / 2), f"sparse: (t/n)^(n/2), n={n}, t={t}")


def to_pm_one(A: ExactMatrix) -> ExactMatrix:
    """Border a 0/1 matrix into a ±1 matrix B of order n+1 with det B = 2^n det A.

    B = [[1, -1^T], [1, 2A - J]]; subtracting the first row from the others
    leaves [[1, -1^T], [0, 2A]].
    """
    if not A.is_square:
        raise DimensionError("to_pm_one needs a square matrix")
    if not A.is_01():
        raise DomainError("to_pm_one needs a 0/1 matrix")
    n = A.nrows
    rows = [(1,) + (-1,) * n]
    rows += [(1,) + tuple(2 * v - 1 for v in r) for r in A.rows]
    return ExactMatrix.from_ints(rows)


def column_diff_transform(A: ExactMatrix) -> ExactMatrix:
    """For i = n-1 down to 1, subtract column i from column i+1.

    Each new column j (j >= 2) is old column j minus old column j-1, so a
    block of ones turns into a +1 at its start and a -1 just past its end.
    """
    rows = tuple(
        tuple(_norm(v - (r[j - 1] if j else 0)) for j, v in enumerate(r)) for r in A.rows
    )
    return ExactMatrix._trusted(rows, A.ncols)


def prefix_sum_columns(B: ExactMatrix) -> ExactMatrix:
    """For i = 1 up to n-1, add column i to column i+1 (inverse of the difference transform)."""
    out = []
    for r in B.rows:
        acc = 0
        new = []
        for v in r:
            acc += v
            new.append(_norm(acc))
        out.append(tuple(new))
    return ExactMatrix._trusted(tuple(out), B.ncols)


def _norm(x):
    if type(x) is int:
        return x
    return x.numerator if x.denominator == 1 else x


# -- exponent function behind the 2n-ones bound --------------------------


@dataclass(frozen=True)
class ExponentPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (0 <= self.y <= self.x <= 1):
            raise DomainError(f"need 0 <= y <= x <= 1, got x={self.x}, y={self.y}")


def sparse_bound_exponent(p: ExponentPoint) -> float:
    """f(x, y) with x = n1/n (single-one rows) and y = n3/n (rows with >= 3 ones).

    det(A)^2 <= 2^(f(x, y) n).  At y = 0 the y*ln(2 + x/y) term is replaced by its
    limit 0.
    """
    x, y = float(p.x), float(p.y)
    tail = y * math.log(2 + x / y) / math.log(2) if y > 0 else 0.0
    if x + 2 * y >= 1:
        return 1 - x - y + tail
    return (2 - 2 * x - y) / 3 + tail


def maximize_exponent_grid(step: float = 1e-3) -> tuple[float, float, float]:
    """Grid maximum of f over 0 <= y <= x <= 1; returns (max, x, y)."""
    import numpy as np

    ticks = np.round(np.arange(0.0, 1.0 + step / 2, step), 12)
    x, y = np.meshgrid(ticks, ticks, indexing="ij")
    mask = y <= x
    x, y = x[mask], y[mask]
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(y > 0, y * np.log(2 + x / np.where(y > 0, y, 1.0)) / np.log(2), 0.0)
    f = np.where(x + 2 * y >= 1, 1 - x - y, (2 - 2 * x - y) / 3) + tail
    i = int(np.argmax(f))
    return float(f[i]), float(x[i]), float(y[i])


def sparse_bound_constant(exponent: float) -> float:
    """Per-dimension growth rate 2^(f/2) of |det A| implied by an exponent f."""
    return 2 ** (exponent / 2)


def two_n_ones_bound(n: int) -> BoundValue:
    return BoundValue(2 ** (n / 6) * 3 ** (n / 6), f"2n-ones: 2^(n/6) 3^(n/6), n={n}")
