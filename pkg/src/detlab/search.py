"""Maximum |det| over constrained classes of square 0/1 matrices.

Two independent routes:

* :func:`exhaustive_max_det` -- plain enumeration of every member of the
  class, no symmetry breaking and no pruning (the oracle);
* :func:`max_det` -- depth-first branch and bound.  Rows are generated in
  strictly decreasing lexicographic order (row permutations only flip the
  sign, equal rows give determinant 0), linearly dependent prefixes are cut,
  and a Hadamard-type bound prunes the rest.
"""

from __future__ import annotations

import itertools
import math
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cop import count_blocks
from .errors import BudgetExceeded, DomainError
from .linalg import BOUND_RTOL, BoundValue, bareiss_det
from .matrix import ExactMatrix

EXHAUSTIVE_MAX_N = 5
SEARCH_MAX_N = 7

VARIANTS = ("maxones", "maxperrow", "kcop")


@dataclass(frozen=True)
class MatrixClass:
    variant: str
    budget: int
    n: int

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown class variant {self.variant!r}")
        if self.budget < 0 or self.n < 1:
            raise DomainError("budget must be >= 0 and n >= 1")

    def row_ok(self, row: Sequence[int]) -> bool:
        if self.variant == "maxperrow":
            return sum(row) <= self.budget
        if self.variant == "kcop":
            return count_blocks(row) <= self.budget
        return sum(row) <= self.budget

    def contains(self, M: ExactMatrix) -> bool:
        if M.shape != (self.n, self.n) or not M.is_01():
            return False
        if self.variant == "maxones":
            return M.count_nonzero() <= self.budget
        return all(self.row_ok(r) for r in M.rows)

    def max_row_sq_norm(self) -> int:
        if self.variant == "maxperrow":
            return min(self.budget, self.n)
        if self.variant == "kcop":
            return self.n if self.budget >= 1 else 0
        return min(self.budget, self.n)

    def __str__(self):
        return f"{self.variant}(n={self.n}, budget={self.budget})"


def MaxOnes(n: int, t: int) -> MatrixClass:
    return MatrixClass("maxones", t, n)


def MaxPerRow(n: int, r: int) -> MatrixClass:
    return MatrixClass("maxperrow", r, n)


def KCop(n: int, k: int) -> MatrixClass:
    return MatrixClass("kcop", k, n)


@dataclass
class SearchReport:
    max_abs_det: int
    witness: ExactMatrix
    nodes_explored: int
    cls: MatrixClass
    seconds: float = 0.0

    def csv_row(self) -> str:
        return f"{self.cls.n},{self.cls.variant},{self.cls.budget},{self.max_abs_det},{self.nodes_explored},{self.seconds:.3f}"


CSV_HEADER = "n,class,budget,max_abs_det,nodes,seconds"


def canonical_row_order(M: ExactMatrix) -> ExactMatrix:
    """Rows sorted in non-increasing lexicographic order (|det| is unchanged)."""
    return ExactMatrix._trusted(tuple(sorted(M.rows, reverse=True)), M.ncols)


def hadamard_prune_bound(
    placed_sq_norms: Sequence, remaining_rows: int, cls: MatrixClass, ones_left: int | None = None
) -> BoundValue:
    """Upper bound on |det| of any completion of a partial matrix.

    Product of the placed rows' norms times the largest product of norms the
    remaining rows can reach under the class budget (AM-GM for a total-ones
    budget).  Passing residual norms (components orthogonal to the earlier
    rows) instead of plain norms is also sound and tighter.
    """
    prod = 1.0
    for s in placed_sq_norms:
        prod *= math.sqrt(float(s))
    if remaining_rows:
        cap = cls.max_row_sq_norm()
        if cls.variant == "maxones":
            left = cls.budget if ones_left is None else ones_left
            cap = min(cap, left / remaining_rows)
        prod *= max(cap, 0) ** (remaining_rows / 2)
    return BoundValue(prod, f"partial hadamard, {remaining_rows} rows left")


def _rows_as_tuples(n: int) -> list[tuple[int, ...]]:
    """All 0/1 rows of length n in decreasing lexicographic order."""
    return [tuple((mask >> (n - 1 - j)) & 1 for j in range(n)) for mask in range((1 << n) - 1, -1, -1)]


def exhaustive_max_det(cls: MatrixClass) -> SearchReport:
    """Oracle: enumerate every member of the class and take the largest |det|."""
    n = cls.n
    if n > EXHAUSTIVE_MAX_N:
        raise BudgetExceeded(f"exhaustive enumeration limited to n <= {EXHAUSTIVE_MAX_N}")
    t0 = time.perf_counter()
    rows = [r for r in _rows_as_tuples(n) if cls.row_ok(r)]
    best, witness, count = -1, None, 0
    for combo in itertools.product(rows, repeat=n):
        if cls.variant == "maxones" and sum(map(sum, combo)) > cls.budget:
            continue
        count += 1
        d = abs(bareiss_det([list(r) for r in combo]))
        if d > best:
            best, witness = d, combo
    return SearchReport(best, ExactMatrix.from_ints(witness), count, cls, time.perf_counter() - t0)


class _Incumbent:
    def __init__(self):
        self.value = 0
        self.lock = threading.Lock()

    def offer(self, v: int) -> None:
        if v > self.value:
            with self.lock:
                if v > self.value:
                    self.value = v


def _prune(bound: float, target: int) -> bool:
    # strict: completions that could tie the incumbent are still explored (deterministic witness)
    return bound * (1 + BOUND_RTOL) + BOUND_RTOL < target


class _Subtree:
    def __init__(self, cls: MatrixClass, rows: list[tuple[int, ...]], shared: _Incumbent):
        self.cls = cls
        self.rows = rows
        self.shared = shared
        self.best = 0
        self.witness = None
        self.nodes = 0

    def run(self, first: int) -> None:
        n = self.cls.n
        r0 = self.rows[first]
        placed = [r0]
        basis = []
        sq = []
        self._extend(basis, sq, r0)
        ones = sum(r0)
        self._dfs(first, placed, basis, sq, ones)

    @staticmethod
    def _extend(basis: list, sq: list, row) -> bool:
        """Gram-Schmidt step over Q; False if row lies in the span of the basis."""
        v = [Fraction(x) for x in row]
        for b, bb in zip(basis, sq):
            c = sum(x * y for x, y in zip(v, b)) / bb
            if c:
                v = [x - c * y for x, y in zip(v, b)]
        s = sum(x * x for x in v)
        if s == 0:
            return False
        basis.append(v)
        sq.append(s)
        return True

    def _dfs(self, last: int, placed: list, basis: list, sq: list, ones: int) -> None:
        self.nodes += 1
        n = self.cls.n
        depth = len(placed)
        if depth == n:
            d = abs(bareiss_det([list(r) for r in placed]))
            if d > self.best:
                self.best = d
                self.witness = tuple(placed)
                self.shared.offer(d)
            return
        target = max(self.best, self.shared.value)
        left = self.cls.budget - ones if self.cls.variant == "maxones" else None
        if _prune(hadamard_prune_bound(sq, n - depth, self.cls, left).value, target):
            return
        remaining_after = n - depth - 1
        for idx in range(last + 1, len(self.rows)):
            row = self.rows[idx]
            w = sum(row)
            if self.cls.variant == "maxones" and ones + w + remaining_after > self.cls.budget:
                continue
            b2, s2 = list(basis), list(sq)
            if not self._extend(b2, s2, row):
                continue
            placed.append(row)
            self._dfs(idx, placed, b2, s2, ones + w)
            placed.pop()


def max_det(cls: MatrixClass, exhaustive: bool = False, threads: int | None = None) -> SearchReport:
    """Largest |det| over the class, with a witness attaining it.

    Ties are resolved by the first witness in the enumeration order, so the
    report's value and witness do not depend on the thread count.
    """
    if exhaustive:
        return exhaustive_max_det(cls)
    n = cls.n
    if n > SEARCH_MAX_N:
        raise BudgetExceeded(f"branch and bound limited to n <= {SEARCH_MAX_N}")
    if threads is None:
        threads = int(os.environ.get("DETLAB_THREADS", "1") or 1)
    t0 = time.perf_counter()
    # zero rows force det 0 and are never generated
    rows = [r for r in _rows_as_tuples(n) if any(r) and cls.row_ok(r)]
    shared = _Incumbent()
    firsts = [i for i, r in enumerate(rows) if cls.variant != "maxones" or sum(r) + n - 1 <= cls.budget]
    subtrees = [_Subtree(cls, rows, shared) for _ in firsts]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda st_i: st_i[0].run(st_i[1]), zip(subtrees, firsts)))
    else:
        for st, i in zip(subtrees, firsts):
            st.run(i)
    best, witness = 0, None
    for st in subtrees:
        if st.witness is not None and st.best > best:
            best, witness = st.best, st.witness
    nodes = sum(st.nodes for st in subtrees)
    W = ExactMatrix.from_ints(witness) if witness is not None else ExactMatrix.zeros(n, n)
    return SearchReport(best, W, nodes, cls, time.perf_counter() - t0)
