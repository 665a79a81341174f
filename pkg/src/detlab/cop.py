"""k-consecutive ones property, its determinant bounds, and 2-COP row shortening."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DomainError, NoNonorthogonalPair
from .linalg import BoundValue, column_diff_transform, det_exact, squared_norm
from .matrix import ExactMatrix


def count_blocks(row: Sequence[int]) -> int:
    """Number of maximal runs of ones in a 0/1 row."""
    blocks = 0
    prev = 0
    for v in row:
        if v != 0 and v != 1:
            raise DomainError(f"non-0/1 entry {v!r}")
        if v and not prev:
            blocks += 1
        prev = v
    return blocks


def has_kcop(M: ExactMatrix, k: int) -> bool:
    """Every row has at most k blocks of ones (columns in their given order)."""
    return all(count_blocks(r) <= k for r in M.rows)


def kcop_bound(n: int, k: int) -> BoundValue:
    if n < 1 or k < 1:
        raise DomainError("n and k must be positive")
    return BoundValue((2 * k) ** (n / 2), f"k-COP: (2k)^(n/2), n={n}, k={k}")


TWO_COP_BASE = 3.936


def two_cop_bound(n: int) -> BoundValue:
    if n < 1:
        raise DomainError("n must be positive")
    return BoundValue(TWO_COP_BASE ** (n / 2), f"2-COP: 3.936^(n/2), n={n}")


def two_cop_conjecture_bound(n: int) -> BoundValue:
    return BoundValue(4 ** (n / 3), f"2-COP conjecture: 4^(n/3), n={n}")


# -- enumeration helpers ----------------------------------------------------


def kcop_rows(n: int, k: int) -> list[tuple[int, ...]]:
    """All 0/1 rows of length n with at most k blocks, in decreasing lexicographic order."""
    out = []
    for mask in range((1 << n) - 1, -1, -1):
        row = tuple((mask >> (n - 1 - j)) & 1 for j in range(n))
        if count_blocks(row) <= k:
            out.append(row)
    return out


def random_kcop_matrix(n: int, k: int, rng: random.Random) -> ExactMatrix:
    rows = kcop_rows(n, k)
    return ExactMatrix.from_ints([rng.choice(rows) for _ in range(n)])


# -- row shortening -------------------------------------------------------


@dataclass(frozen=True)
class RowPartition:
    R: tuple[int, ...]
    S: tuple[int, ...]
    S_prime: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.R)


@dataclass
class TwoCopReduction:
    rows: list[tuple]  # final rows (exact), in original row positions
    partition: RowPartition
    abs_det: int
    steps: list[tuple[int, int]] = field(default_factory=list)  # (replaced a, partner b)
    trace: list[ExactMatrix] = field(default_factory=list)

    @property
    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.rows)

    def hadamard_product(self) -> float:
        return math.prod(math.sqrt(float(squared_norm(r))) for r in self.rows)

    def short_row_count(self) -> int:
        """Rows with squared norm <= 15/4."""
        return sum(1 for r in self.rows if squared_norm(r) <= Fraction(15, 4))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def two_cop_reduce(A: ExactMatrix, trace: bool = False) -> TwoCopReduction:
    """Shorten rows of the column-difference transform of a 2-COP matrix.

    While 4|R| > 3n (R = rows with four non-zeros), pick the lexicographically
    first pair (i, j) in R with |r_i . r_j| maximal and non-zero, and replace
    r_i by r_i - (r_i . r_j)/(r_j . r_j) r_j, moving i from R to S'.
    Each replacement is a unimodular row operation, so |det| never changes.
    """
    if not A.is_square:
        raise DomainError("two_cop_reduce needs a square matrix")
    if not A.is_01() or not has_kcop(A, 2):
        raise DomainError("input must be a 0/1 matrix with the 2-consecutive ones property")
    n = A.nrows
    B = column_diff_transform(A)
    rows: list[tuple] = list(B.rows)
    R = [i for i, r in enumerate(rows) if sum(1 for v in r if v) == 4]
    S = [i for i in range(n) if i not in R]
    abs_det = abs(det_exact(A))
    result = TwoCopReduction(rows, RowPartition(tuple(R), tuple(S), ()), abs_det)
    if trace:
        result.trace.append(B)
    if abs_det == 0:
        return result
    S_prime: list[int] = []
    while 4 * len(R) > 3 * n:
        best = None
        for x in range(len(R)):
            for y in range(len(R)):
                if x == y:
                    continue
                d = abs(_dot(rows[R[x]], rows[R[y]]))
                if d and (best is None or d > best[0]):
                    best = (d, R[x], R[y])
        if best is None:
            raise NoNonorthogonalPair(
                f"all {len(R)} four-entry rows pairwise orthogonal with n={n}"
            )
        _, i, j = best
        a, b = rows[i], rows[j]
        coef = Fraction(_dot(a, b), _dot(b, b))
        rows[i] = tuple(_norm(x - coef * y) for x, y in zip(a, b))
        R.remove(i)
        S_prime.append(i)
        result.steps.append((i, j))
        if trace:
            result.trace.append(ExactMatrix(rows))
    result.partition = RowPartition(tuple(R), tuple(S), tuple(S_prime))
    return result


def _norm(x):
    if type(x) is int:
        return x
    return x.numerator if x.denominator == 1 else x
