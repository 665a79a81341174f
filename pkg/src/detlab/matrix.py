"""Immutable dense matrices with exact integer / rational entries.

Entries are stored as Python ``int`` whenever they are integral and as
``fractions.Fraction`` otherwise, so integer matrices never pay for rational
arithmetic.  Floats are rejected outright.

Text format::

    3 3
    1 1 0
    0 1 1
    1 0 1/2

JSON format: ``{"rows": 3, "cols": 3, "data": [[1, 1, 0], ...]}`` where
non-integral entries are written as ``"p/q"`` strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DimensionError


def to_exact(x) -> int | Fraction:
    """Coerce a scalar to ``int`` (if integral) or ``Fraction``; floats raise."""
    if type(x) is int:
        return x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, float):
        raise TypeError(f"floating point entry {x!r} not allowed in an ExactMatrix")
    if isinstance(x, str):
        x = Fraction(x.strip())
    elif isinstance(x, Rational):
        x = Fraction(x)
    elif hasattr(x, "__index__"):
        return int(x)
    else:
        raise TypeError(f"unsupported entry type {type(x).__name__}")
    return x.numerator if x.denominator == 1 else x


class ExactMatrix:
    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_exact(v) for v in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise DimensionError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def _trusted(cls, rows: tuple, ncols: int) -> "ExactMatrix":
        # rows must already be a tuple of tuples of normalized exact scalars
        m = object.__new__(cls)
        m._rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def from_ints(cls, rows: Sequence[Sequence[int]]) -> "ExactMatrix":
        """Fast constructor for data known to be integral (no per-entry checks)."""
        data = tuple(tuple(r) for r in rows)
        return cls._trusted(data, len(data[0]) if data else 0)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._trusted(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "ExactMatrix":
        return cls._trusted(tuple((0,) * c for _ in range(r)), c)

    @classmethod
    def block_diag(cls, *blocks: "ExactMatrix") -> "ExactMatrix":
        ncols = sum(b.ncols for b in blocks)
        out = []
        offset = 0
        for b in blocks:
            for r in b._rows:
                out.append((0,) * offset + r + (0,) * (ncols - offset - b.ncols))
            offset += b.ncols
        return cls._trusted(tuple(out), ncols)

    # -- access ---------------------------------------------------------
    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def is_integer(self) -> bool:
        return all(type(v) is int for r in self._rows for v in r)

    def is_01(self) -> bool:
        return all(v == 0 or v == 1 for r in self._rows for v in r)

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return self.nrows

    def tolist(self) -> list[list]:
        return [list(r) for r in self._rows]

    def count_nonzero(self) -> int:
        return sum(1 for r in self._rows for v in r if v)

    # -- algebra --------------------------------------------------------
    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._trusted(tuple(zip(*self._rows)) if self.nrows else (), self.nrows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other._rows))
        out = tuple(
            tuple(_normalize(sum(a * b for a, b in zip(r, c))) for c in cols) for r in self._rows
        )
        return ExactMatrix._trusted(out, other.ncols)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix._trusted(tuple(tuple(-v for v in r) for r in self._rows), self.ncols)

    def scale(self, c) -> "ExactMatrix":
        c = to_exact(c)
        return ExactMatrix._trusted(
            tuple(tuple(_normalize(c * v) for v in r) for r in self._rows), self.ncols
        )

    def permute_columns(self, order: Sequence[int]) -> "ExactMatrix":
        """Column ``j`` of the result is column ``order[j]`` of ``self``."""
        if sorted(order) != list(range(self.ncols)):
            raise DimensionError("order is not a permutation of the columns")
        return ExactMatrix._trusted(tuple(tuple(r[j] for j in order) for r in self._rows), self.ncols)

    def permute_rows(self, order: Sequence[int]) -> "ExactMatrix":
        if sorted(order) != list(range(self.nrows)):
            raise DimensionError("order is not a permutation of the rows")
        return ExactMatrix._trusted(tuple(self._rows[i] for i in order), self.ncols)

    def with_row(self, i: int, new_row: Iterable) -> "ExactMatrix":
        new_row = tuple(to_exact(v) for v in new_row)
        if len(new_row) != self.ncols:
            raise DimensionError("row length mismatch")
        rows = list(self._rows)
        rows[i] = new_row
        return ExactMatrix._trusted(tuple(rows), self.ncols)

    def append_row(self, new_row: Iterable) -> "ExactMatrix":
        new_row = tuple(to_exact(v) for v in new_row)
        if len(new_row) != self.ncols:
            raise DimensionError("row length mismatch")
        return ExactMatrix._trusted(self._rows + (new_row,), self.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix._trusted(
            tuple(tuple(self._rows[i][j] for j in cols) for i in rows), len(cols)
        )

    # -- dunder ---------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self._rows == other._rows

    def __hash__(self):
        return hash((self.ncols, self._rows))

    def __repr__(self):
        return f"ExactMatrix({[[str(v) for v in r] for r in self._rows]})"

    # -- serialization --------------------------------------------------
    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        lines += [" ".join(str(v) for v in r) for r in self._rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExactMatrix":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise DimensionError("empty matrix text")
        header = lines[0].split()
        if len(header) != 2:
            raise DimensionError("first line must be 'rows cols'")
        r, c = int(header[0]), int(header[1])
        body = [ln.split() for ln in lines[1:]]
        if len(body) != r or any(len(row) != c for row in body):
            raise DimensionError(f"expected {r} rows of {c} entries")
        return cls(body, ncols=c)

    def to_json_obj(self) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "data": [[v if type(v) is int else str(v) for v in r] for r in self._rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExactMatrix":
        data = obj["data"]
        m = cls(data, ncols=obj["cols"])
        if m.nrows != obj["rows"]:
            raise DimensionError("row count mismatch in JSON matrix")
        return m

    @classmethod
    def from_json(cls, text: str) -> "ExactMatrix":
        return cls.from_json_obj(json.loads(text))

    @classmethod
    def parse(cls, text: str) -> "ExactMatrix":
        """Accept either the text or the JSON form."""
        if text.lstrip().startswith("{"):
            return cls.from_json(text)
        return cls.from_text(text)


def _normalize(x):
    if type(x) is int:
        return x
    return x.numerator if x.denominator == 1 else x
