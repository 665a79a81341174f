"""Exact two-phase simplex over the rationals with Bland's anti-cycling rule.

Solves  min c.x  s.t.  A x <= b,  x >= 0  with every quantity a ``Fraction``.
No tolerances anywhere: an "infeasible" answer is a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int, obj: list[Fraction], obj_val: list[Fraction]) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row[:] = [v / piv for v in row]
            self.rhs[r] /= piv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                other[:] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        f = obj[c]
        if f:
            obj[:] = [a - f * b for a, b in zip(obj, row)]
            obj_val[0] -= f * self.rhs[r]
        self.basis[r] = c

    def run(self, obj: list[Fraction], obj_val: list[Fraction], allowed: int) -> str:
        """Minimize; ``obj`` holds reduced costs, columns >= allowed may not enter."""
        while True:
            enter = next((j for j in range(allowed) if obj[j] < 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter, obj, obj_val)


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize c.x subject to A x <= b and x >= 0, exactly."""
    n = len(c)
    m = len(A)
    c = [Fraction(v) for v in c]
    # columns: x (n) | slack (m) | artificial (one per row with negative rhs)
    neg = [i for i in range(m) if Fraction(b[i]) < 0]
    art_col = {i: n + m + t for t, i in enumerate(neg)}
    width = n + m + len(neg)
    rows, rhs, basis = [], [], []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * (m + len(neg))
        row[n + i] = Fraction(1)
        bi = Fraction(b[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
            row[art_col[i]] = Fraction(1)
            basis.append(art_col[i])
        else:
            basis.append(n + i)
        rows.append(row)
        rhs.append(bi)
    tab = _Tableau(rows, rhs, basis)

    if neg:
        obj = [Fraction(0)] * width
        val = [Fraction(0)]
        for i in neg:
            obj = [a - v for a, v in zip(obj, rows[i])]
            val[0] -= rhs[i]
        for col in art_col.values():
            obj[col] = Fraction(0)
        tab.run(obj, val, n + m)
        if val[0] != 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= n + m:
                col = next((j for j in range(n + m) if tab.rows[r][j] != 0), None)
                if col is None:
                    del tab.rows[r], tab.rhs[r], tab.basis[r]
                    continue
                tab.pivot(r, col, [Fraction(0)] * width, [Fraction(0)])
            r += 1

    obj = c + [Fraction(0)] * (width - n)
    val = [Fraction(0)]
    for i, bcol in enumerate(tab.basis):
        f = obj[bcol]
        if f:
            obj = [a - f * v for a, v in zip(obj, tab.rows[i])]
            val[0] -= f * tab.rhs[i]
    status = tab.run(obj, val, n + m)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bcol in enumerate(tab.basis):
        if bcol < n:
            x[bcol] = tab.rhs[i]
    return LPResult(OPTIMAL, tuple(x), sum(ci * xi for ci, xi in zip(c, x)))
