"""Explicit matrix families with known determinants.

Every constructor returns a :class:`ConstructionResult` whose predicted
determinant has already been checked against an exact determinant, together
with property tags that were machine-verified at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InvariantViolation
from .linalg import det_exact, prefix_sum_columns
from .matrix import ExactMatrix

CYCLIC_C = ExactMatrix.from_ints([[1, 1, 0], [0, 1, 1], [1, 0, 1]])

# lines {i, i+1, i+3} mod 7 (perfect difference set) give the (7,3,1) configuration
FANO = ExactMatrix.from_ints(
    [[1 if (j - i) % 7 in (0, 1, 3) else 0 for j in range(7)] for i in range(7)]
)

TWO_COP_H = ExactMatrix.from_ints([[1, 1, -1], [1, -1, 1], [1, -1, -1]])
TWO_COP_R = ExactMatrix.from_ints([[-1, 0, 0], [0, 0, 0], [0, 1, 0]])


@dataclass(frozen=True)
class ConstructionResult:
    matrix: ExactMatrix
    predicted_abs_det: int
    property_tags: tuple[str, ...] = ()

    def __post_init__(self):
        actual = abs(det_exact(self.matrix))
        if actual != self.predicted_abs_det:
            raise InvariantViolation(
                f"construction has |det| = {actual}, predicted {self.predicted_abs_det}"
            )


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def cyclic_block_matrix(n: int) -> ConstructionResult:
    if n <= 0 or n % 3:
        raise DomainError(f"cyclic blocks need 3 | n, got n={n}")
    A = ExactMatrix.block_diag(*[CYCLIC_C] * (n // 3))
    return ConstructionResult(A, 2 ** (n // 3), (f"ones={2 * n}", "<=2 ones per row"))


def fano_block_matrix(n: int) -> ConstructionResult:
    if n <= 0 or n % 7:
        raise DomainError(f"Fano blocks need 7 | n, got n={n}")
    A = ExactMatrix.block_diag(*[FANO] * (n // 7))
    return ConstructionResult(A, 24 ** (n // 7), (f"ones={3 * n}",))


def sylvester_hadamard(k: int) -> ExactMatrix:
    """Sylvester Hadamard matrix of order k; its first column is all ones."""
    if not _is_power_of_two(k):
        raise DomainError(f"Sylvester construction needs a power of two, got {k}")
    H = [[1]]
    while len(H) < k:
        H = [r + r for r in H] + [r + [-v for v in r] for r in H]
    return ExactMatrix.from_ints(H)


def _check_hadamard_first_col(H: ExactMatrix) -> None:
    if not H.is_square or any(v not in (1, -1) for r in H.rows for v in r):
        raise DomainError("H must be a square ±1 matrix")
    if any(r[0] != 1 for r in H.rows):
        raise DomainError("H must have an all-ones first column")


def interleave_filler(H: ExactMatrix) -> ExactMatrix:
    """Filler R so that each row H1 R1 H2 R2 ... Hk Rk alternates in sign starting with +1.

    R[r, i] = -H[r, i] when H[r, i] == H[r, i+1] (the only way to keep the signs
    alternating), 0 otherwise; the last column is zero.
    """
    _check_hadamard_first_col(H)
    k = H.nrows
    rows = []
    for h in H.rows:
        rows.append([-h[i] if i + 1 < k and h[i] == h[i + 1] else 0 for i in range(k)])
    R = ExactMatrix.from_ints(rows)
    bad = [i for i, row in enumerate(interleave_rows(H, R)) if not alternating_profile_ok(row, k)]
    if bad:
        raise InvariantViolation(f"interleaved rows {bad} violate the alternation properties")
    return R


def interleave_rows(H: ExactMatrix, R: ExactMatrix) -> list[tuple[int, ...]]:
    """Rows of (H_{.,1} R_{.,1} H_{.,2} R_{.,2} ... H_{.,k} R_{.,k})."""
    out = []
    for h, r in zip(H.rows, R.rows):
        row = []
        for a, b in zip(h, r):
            row += [a, b]
        out.append(tuple(row))
    return out


def alternating_profile_ok(row, k: int | None = None) -> bool:
    """At most ``2 * k`` non-zeros, the first one is +1, and the signs alternate."""
    nz = [v for v in row if v]
    if any(v not in (1, -1) for v in nz):
        return False
    if k is not None and len(nz) > 2 * k:
        return False
    if nz and nz[0] != 1:
        return False
    return all(a == -b for a, b in zip(nz, nz[1:]))


def _block_bidiagonal(H: ExactMatrix, R: ExactMatrix, p: int) -> ExactMatrix:
    k = H.nrows
    n = p * k
    rows = []
    for b in range(p - 1):
        for i in range(k):
            row = [0] * n
            row[b * k : (b + 1) * k] = H.rows[i]
            row[(b + 1) * k : (b + 2) * k] = R.rows[i]
            rows.append(row)
    for i in range(k):
        row = [0] * n
        row[(p - 1) * k + i] = 1
        rows.append(row)
    return ExactMatrix.from_ints(rows)


def residue_interleave_order(k: int, p: int) -> list[int]:
    """0-based column order v_1 v_{k+1} ... v_{(p-1)k+1} v_2 v_{k+2} ... v_k ... v_{pk}."""
    return [b * k + j for j in range(k) for b in range(p)]


def _interleaved_construction(H: ExactMatrix, R: ExactMatrix, p: int):
    A = _block_bidiagonal(H, R, p)
    B = A.permute_columns(residue_interleave_order(H.nrows, p))
    C = prefix_sum_columns(B)
    return A, B, C


def kcop_construct(k: int, p: int) -> ConstructionResult:
    """0/1 matrix of order n = pk with the k-consecutive ones property and |det| = k^((n-k)/2)."""
    from .cop import has_kcop

    if not _is_power_of_two(k) or k > 16:
        raise DomainError(f"k must be a power of two <= 16, got {k}")
    if p < 2:
        raise DomainError(f"need at least 2 blocks, got p={p}")
    H = sylvester_hadamard(k)
    R = interleave_filler(H)
    _, B, C = _interleaved_construction(H, R, p)
    if not all(alternating_profile_ok(r, k) for r in B.rows):
        raise InvariantViolation("interleaved matrix violates the alternation properties")
    if not C.is_01() or not has_kcop(C, k):
        raise InvariantViolation(f"prefix-summed matrix is not a 0/1 {k}-COP matrix")
    n = p * k
    # |det H|^(p-1) = k^(k(p-1)/2); k(p-1) is even unless k = 1
    return ConstructionResult(C, _int_power_half(k, n - k), (f"k-COP with k={k}", "0/1"))


def kcop_intermediate(k: int, p: int) -> ExactMatrix:
    """The interleaved ±1/0 matrix B before prefix summation (for property checks)."""
    H = sylvester_hadamard(k)
    return _interleaved_construction(H, interleave_filler(H), p)[1]


def two_cop_construct(p: int) -> ConstructionResult:
    """0/1 matrix of order n = 3p with the 2-consecutive ones property and |det| = 4^((n-3)/3)."""
    from .cop import has_kcop

    if p < 2:
        raise DomainError(f"need at least 2 blocks, got p={p}")
    _, B, C = _interleaved_construction(TWO_COP_H, TWO_COP_R, p)
    if not all(alternating_profile_ok(r, 2) for r in B.rows):
        raise InvariantViolation("interleaved matrix violates the alternation properties")
    if not C.is_01() or not has_kcop(C, 2):
        raise InvariantViolation("prefix-summed matrix is not a 0/1 2-COP matrix")
    return ConstructionResult(C, 4 ** (p - 1), ("k-COP with k=2", "0/1"))


def prop01_extremal(n: int, t: int) -> ConstructionResult:
    """Block diagonal copies of a Hadamard matrix of order t/n: |det| = (t/n)^(n/2) with t non-zeros."""
    if n <= 0 or t <= 0 or t % n:
        raise DomainError(f"t/n must be a positive integer, got n={n}, t={t}")
    k = t // n
    if n % k:
        raise DomainError(f"n^2/t must be integral, got n={n}, t={t}")
    if not _is_power_of_two(k):
        raise DomainError(f"only Sylvester orders are supported, t/n = {k}")
    H = sylvester_hadamard(k)
    A = ExactMatrix.block_diag(*[H] * (n // k))
    return ConstructionResult(A, _int_power_half(k, n), (f"nonzeros={t}",))


def _int_power_half(base: int, exp: int) -> int:
    """base^(exp/2) as an exact integer (base a perfect square when exp is odd)."""
    if exp % 2 == 0:
        return base ** (exp // 2)
    import math

    r = math.isqrt(base)
    if r * r != base:
        raise DomainError(f"{base}^({exp}/2) is not an integer")
    return r**exp
