"""Batch verification suites.

Each suite checks one family of exact identities or bounds over an
enumerated or seeded-random instance set.  A suite raises
:class:`InvariantViolation` on the first failure, with the offending
instance in the message, and otherwise returns a :class:`SuiteResult`
holding the instance counts.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import constructions as cons
from .cop import has_kcop, kcop_rows, two_cop_reduce
from .errors import InvariantViolation
from .graphs import (
    Graph,
    atlas_graphs,
    brute_gram_det,
    complete_graph,
    connected_graphs,
    cycle_graph,
    edge_lists_gram_dets,
    extremal_gram_graph,
    extremal_gram_value,
    gram_det_formula,
    lemma_gram_bound,
    path_graph,
    prufer_edges,
    random_tree,
)
from .leafrank import leaf_rank, leaf_root_check
from .linalg import (
    bareiss_det,
    det_exact,
    gram_determinant,
    hadamard_row_bound,
    maximize_exponent_grid,
    sparse_bound_constant,
    squared_norm,
    two_n_ones_bound,
)
from .matrix import ExactMatrix
from .paths import (
    NON_REALIZABLE_2COP,
    RootedTree,
    ancestor_transform,
    extremal_path_instance,
    is_realizable,
    path_edge_matrix,
    random_path_family,
    reduce_path_matrix,
)
from .search import KCop, MaxOnes, MaxPerRow, exhaustive_max_det, max_det


@dataclass
class SuiteResult:
    name: str
    counts: dict = field(default_factory=dict)
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    def summary(self) -> str:
        parts = " ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"OK {parts}".rstrip()


def _fail(msg: str) -> None:
    raise InvariantViolation(msg)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- graph Gramians ---------------------------------------------------------


@_timed
def gram_tree(max_n: int = 8, random_n: int = 9, samples: int = 100_000, seed: int = 0) -> SuiteResult:
    """det(I I^T) = n for every labelled tree up to max_n, plus random trees on random_n vertices."""
    count = 0
    for n in range(2, max_n + 1):
        seqs = itertools.product(range(n), repeat=n - 2)
        count += _tree_batches(n, seqs)
    rng = random.Random(seed)
    sampled = 0
    if random_n and samples:
        seqs = ([rng.randrange(random_n) for _ in range(random_n - 2)] for _ in range(samples))
        sampled = _tree_batches(random_n, seqs)
    return SuiteResult("gram-tree", {"trees": count, "random": sampled})


def _tree_batches(n: int, seqs, chunk: int = 20_000) -> int:
    count = 0
    while True:
        batch = [prufer_edges(seq, n) for seq in itertools.islice(seqs, chunk)]
        if not batch:
            return count
        for edges, d in zip(batch, edge_lists_gram_dets(batch)):
            if d != n:
                _fail(f"tree with Gram determinant {d} != {n}: edges {edges}")
        count += len(batch)


@_timed
def gram_formula(max_n: int = 7, labelled_max_n: int = 7) -> SuiteResult:
    """Closed-form Gram determinant of connected graphs with m <= n against elimination.

    Every labelled connected graph up to ``labelled_max_n`` vertices is checked;
    above that one graph per isomorphism class (relabelling permutes rows and
    columns, which leaves the Gram determinant unchanged).
    """
    labelled = iso = 0
    for n in range(2, min(max_n, labelled_max_n) + 1):
        for G in connected_graphs(n, max_edges=n):
            _check_formula(G)
            labelled += 1
    if max_n > labelled_max_n:
        for G in atlas_graphs(max_n):
            if G.n <= labelled_max_n or G.m > G.n or G.m == 0 or not G.is_connected():
                continue
            _check_formula(G)
            iso += 1
    return SuiteResult("gram-formula", {"labelled": labelled, "classes": iso})


def _check_formula(G: Graph) -> None:
    want = brute_gram_det(G)
    got = gram_det_formula(G)
    if want != got:
        _fail(f"formula gives {got}, elimination gives {want}: {G.to_json_obj()}")


@_timed
def gram_bound(max_n: int = 7, labelled_max_n: int = 6, extremal_max_n: int = 9) -> SuiteResult:
    """Gram determinant of every graph stays below the two-regime bound; extremal graphs meet it."""
    checked = 0
    graphs = itertools.chain(
        (G for n in range(1, labelled_max_n + 1) for G in _all_labelled(n)),
        (G for G in atlas_graphs(max_n) if G.n > labelled_max_n),
    )
    for G in graphs:
        if G.m == 0:
            continue
        d = brute_gram_det(G)
        b = lemma_gram_bound(G.n, G.m)
        if not b.admits(d):
            _fail(f"Gram determinant {d} exceeds {b.value}: {G.to_json_obj()}")
        checked += 1
    tight = 0
    for n in range(1, extremal_max_n + 1):
        for m in range(1, n + 1):
            if 2 * m > n and (2 * m - n) % 3:
                continue
            G = extremal_gram_graph(n, m)
            d = brute_gram_det(G)
            if G.m != m or d != extremal_gram_value(n, m):
                _fail(f"extremal graph n={n} m={m} has Gram determinant {d}")
            if abs(d - lemma_gram_bound(n, m).value) > 1e-9 * d:
                _fail(f"extremal value {d} differs from the bound at n={n} m={m}")
            tight += 1
    return SuiteResult("gram-bound", {"graphs": checked, "extremal": tight})


def _all_labelled(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [p for i, p in enumerate(pairs) if mask >> i & 1])


@_timed
def gram_invariance(trials: int = 1000, seed: int = 0) -> SuiteResult:
    """Row sign flips, row additions and row/column permutations keep det(M M^T);
    appending a row a multiplies it by at most |a|^2, with equality iff a is
    orthogonal to the earlier rows."""
    rng = random.Random(seed)
    counts = {"sign": 0, "add": 0, "permute": 0, "append": 0, "orthogonal": 0}
    for _ in range(trials):
        M = _random_int_matrix(rng)
        base = gram_determinant(M)
        rows = [list(r) for r in M.rows]
        m = len(rows)

        i = rng.randrange(m)
        flipped = [r[:] for r in rows]
        flipped[i] = [-v for v in flipped[i]]
        _expect_equal(base, ExactMatrix(flipped), "sign flip", M)
        counts["sign"] += 1

        # a row addition needs two rows; single-row draws get a fresh matrix
        A = M if m > 1 else _random_int_matrix(rng, min_rows=2)
        i, j = rng.sample(range(A.nrows), 2)
        alpha = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        added = [list(r) for r in A.rows]
        added[i] = [a + alpha * b for a, b in zip(added[i], added[j])]
        _expect_equal(gram_determinant(A), ExactMatrix(added), "row addition", A)
        counts["add"] += 1

        rp = rng.sample(range(m), m)
        cp = rng.sample(range(M.ncols), M.ncols)
        _expect_equal(base, M.permute_rows(rp).permute_columns(cp), "permutation", M)
        counts["permute"] += 1

        a = _random_appended_row(M, rng)
        grown = gram_determinant(M.append_row(a))
        cap = base * squared_norm(a)
        if grown > cap:
            _fail(f"appending {a} to {M.tolist()} gives {grown} > {cap}")
        orth = _orthogonal_to_rowspace(M, a)
        if base and (grown == cap) != orth:
            _fail(f"equality case wrong for {a} appended to {M.tolist()}")
        counts["orthogonal"] += orth
        counts["append"] += 1
    return SuiteResult("gram-invariance", counts)


def _random_int_matrix(rng: random.Random, min_rows: int = 1) -> ExactMatrix:
    m = rng.randint(min_rows, 5)
    n = rng.randint(m, 6)
    return ExactMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)])


def _random_appended_row(M: ExactMatrix, rng: random.Random) -> list[int]:
    if rng.random() < 0.3:
        # orthogonal to every row: exercises the equality case
        return _integer_null_vector(M, rng)
    return [rng.randint(-3, 3) for _ in range(M.ncols)]


def _integer_null_vector(M: ExactMatrix, rng: random.Random) -> list[int]:
    """A non-zero integer vector orthogonal to the rows of M (zero if none exists)."""
    n = M.ncols
    # reduced row echelon form over Q, then one free variable set to 1
    rows = [[Fraction(v) for v in r] for r in M.rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [v / rows[r][c] for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return [0] * n
    x = [Fraction(0)] * n
    x[rng.choice(free)] = Fraction(rng.randint(1, 3))
    for i, c in enumerate(pivots):
        x[c] = -sum(rows[i][j] * x[j] for j in free)
    den = math.lcm(*(v.denominator for v in x))
    return [int(v * den) for v in x]


def _orthogonal_to_rowspace(M: ExactMatrix, a) -> bool:
    return all(sum(x * y for x, y in zip(a, r)) == 0 for r in M.rows)


def _expect_equal(base, J: ExactMatrix, what: str, M: ExactMatrix) -> None:
    got = gram_determinant(J)
    if got != base:
        _fail(f"{what} changed the Gram determinant {base} -> {got} for {M.tolist()}")


# -- constructions ------------------------------------------------------------


@_timed
def construction_dets() -> SuiteResult:
    """Every named construction hits its predicted |det| exactly."""
    checks = []
    for n in (3, 6, 9, 12, 15):
        checks.append(("cyclic", n, cons.cyclic_block_matrix(n), 2 ** (n // 3), None))
    for n, want in ((7, 24), (14, 576)):
        checks.append(("fano", n, cons.fano_block_matrix(n), want, None))
    for k, p in ((2, 2), (2, 3), (2, 4), (4, 2), (4, 3)):
        n = k * p
        want = cons._int_power_half(k, n - k)
        checks.append((f"kcop k={k}", n, cons.kcop_construct(k, p), want, k))
    for p in (2, 3, 4):
        n = 3 * p
        checks.append(("two-cop", n, cons.two_cop_construct(p), 4 ** ((n - 3) // 3), 2))
    for n, t in ((4, 8), (8, 32)):
        checks.append(("prop01", n, cons.prop01_extremal(n, t), cons._int_power_half(t // n, n), None))
    for name, n, res, want, k in checks:
        got = abs(bareiss_det([list(r) for r in res.matrix.rows]))
        if got != want or res.predicted_abs_det != want:
            _fail(f"{name} n={n}: |det| {got}, predicted {res.predicted_abs_det}, expected {want}")
        if k is not None and not has_kcop(res.matrix, k):
            _fail(f"{name} n={n}: matrix lacks the {k}-consecutive ones property")
    return SuiteResult("constructions", {"matrices": len(checks)})


# -- search -----------------------------------------------------------------


@_timed
def search_oracle(oracle_max_n: int = 4, conj_ns=(3, 4, 5), threads=(1, 2)) -> SuiteResult:
    """Branch and bound against plain enumeration, plus the small-n bound checks."""
    compared = 0
    for n in range(1, oracle_max_n + 1):
        classes = [MaxOnes(n, t) for t in sorted({n, 2 * n, 3 * n})]
        classes += [MaxPerRow(n, r) for r in range(1, n + 1)]
        classes += [KCop(n, k) for k in (1, 2)]
        for cls in classes:
            a = max_det(cls)
            b = exhaustive_max_det(cls)
            if a.max_abs_det != b.max_abs_det:
                _fail(f"{cls}: branch and bound {a.max_abs_det}, enumeration {b.max_abs_det}")
            _check_witness(a)
            compared += 1
    values = {}
    for n in conj_ns:
        rep = max_det(MaxOnes(n, 2 * n))
        _check_witness(rep)
        v = rep.max_abs_det
        if v > 2 ** (n / 3) * (1 + 1e-9):
            _fail(f"MaxOnes(2n) at n={n}: {v} > 2^(n/3)")
        if not two_n_ones_bound(n).admits(v):
            _fail(f"MaxOnes(2n) at n={n}: {v} > 2^(n/6) 3^(n/6)")
        values[n] = v
    r = max_det(MaxPerRow(3, 2))
    if r.max_abs_det != 2:
        _fail(f"MaxPerRow(2) at n=3 gives {r.max_abs_det}, expected 2")
    ref = None
    for t in threads:
        rep = max_det(MaxOnes(4, 8), threads=t)
        key = (rep.max_abs_det, rep.witness)
        if ref is not None and key != ref:
            _fail(f"thread count {t} changed the report")
        ref = key
    counts = {"classes": compared}
    counts.update({f"maxones2n_n{n}": v for n, v in values.items()})
    return SuiteResult("search", counts)


def _check_witness(rep) -> None:
    W = rep.witness
    if rep.max_abs_det and not rep.cls.contains(W):
        _fail(f"{rep.cls}: witness not in the class:\n{W.to_text()}")
    if abs(bareiss_det([list(r) for r in W.rows])) != rep.max_abs_det:
        _fail(f"{rep.cls}: witness determinant differs from the reported maximum")


# -- 2-COP row shortening ----------------------------------------------------


@_timed
def two_cop(exhaustive_max_n: int = 4, samples: int = 10_000, sizes=(5, 6, 7, 8), seed: int = 0) -> SuiteResult:
    """Row shortening keeps |det|, leaves >= n/4 short rows and stays below 3.936^(n/2)."""
    exhaustive = 0
    for n in range(1, exhaustive_max_n + 1):
        rows = kcop_rows(n, 2)
        for combo in itertools.product(rows, repeat=n):
            if _two_cop_case(ExactMatrix.from_ints(combo)):
                exhaustive += 1
    rng = random.Random(seed)
    cache = {n: kcop_rows(n, 2)[:-1] for n in sizes}  # drop the zero row
    sampled = drawn = 0
    while sampled < samples:
        n = rng.choice(sizes)
        A = ExactMatrix.from_ints([rng.choice(cache[n]) for _ in range(n)])
        drawn += 1
        if _two_cop_case(A):
            sampled += 1
    return SuiteResult("two-cop", {"exhaustive": exhaustive, "random": sampled, "drawn": drawn})


def _two_cop_case(A: ExactMatrix) -> bool:
    """True if A is nonsingular (and then fully checked)."""
    n = A.nrows
    d = abs(bareiss_det([list(r) for r in A.rows]))
    if d == 0:
        return False
    red = two_cop_reduce(A)
    B = red.matrix
    got = abs(det_exact(B))
    if got != d or red.abs_det != d:
        _fail(f"row shortening changed |det| {d} -> {got}:\n{A.to_text()}")
    if 4 * red.short_row_count() < n:
        _fail(f"only {red.short_row_count()} short rows for n={n}:\n{A.to_text()}")
    h = red.hadamard_product()
    if h > 3.936 ** (n / 2) * (1 + 1e-9):
        _fail(f"final Hadamard product {h} > 3.936^(n/2):\n{A.to_text()}")
    if not h * (1 + 1e-9) >= d:
        _fail(f"Hadamard product {h} below |det| {d}:\n{A.to_text()}")
    return True


# -- path-edge matrices ------------------------------------------------------


@_timed
def paths(depths=(1, 2, 3), samples: int = 1000, max_n: int = 8, seed: int = 0) -> SuiteResult:
    """Extremal instances, random tree/path families, and the non-realizable 2-COP matrix."""
    for d in depths:
        T, P, want = extremal_path_instance(d)
        A = path_edge_matrix(T.graph, P)
        got = abs(det_exact(A))
        n = T.n
        if got != want or 3 * want.bit_length() - 3 != 2 * n - 5:
            _fail(f"extremal instance d={d}: |det| {got}, expected 2^((2n-5)/3) = {want}")
    rng = random.Random(seed)
    nonsingular = steps = 0
    for _ in range(samples):
        n = rng.randint(2, max_n)
        tree = random_tree(n, rng)
        P = random_path_family(tree, n - 1, rng)
        T = RootedTree(tree, 0)
        order = T.bfs_edges()
        A = path_edge_matrix(tree, P, order)
        d = abs(det_exact(A))
        if d > 2 ** (n - 1):
            _fail(f"|det| {d} > 2^(n-1) for tree {tree.to_json_obj()} paths {P.to_text()!r}")
        At = ancestor_transform(A, T, order)
        if abs(det_exact(At)) != d:
            _fail(f"ancestor transform changed |det| for tree {tree.to_json_obj()}")
        h = hadamard_row_bound(At).value
        if h > 6 ** ((n - 1) / 2) * (1 + 1e-9):
            _fail(f"transformed Hadamard bound {h} > 6^((n-1)/2) for tree {tree.to_json_obj()}")
        if d == 0:
            continue
        nonsingular += 1
        st = reduce_path_matrix(At, T, order, trace=True)
        for B in st.trace:
            if abs(det_exact(B)) != d:
                _fail(f"elimination step changed |det| for tree {tree.to_json_obj()} paths {P.to_text()!r}")
            steps += 1
        fb = st.final_bound()
        if not d <= fb * (1 + 1e-9) or fb > 2 ** (n - 1) * (1 + 1e-9):
            _fail(f"final bound {fb} out of range for |det| {d}, n={n}")
    if not has_kcop(NON_REALIZABLE_2COP, 2) or is_realizable(NON_REALIZABLE_2COP):
        _fail("the 4x4 2-COP matrix should be non-realizable")
    return SuiteResult("paths", {"extremal": len(depths), "random": samples, "nonsingular": nonsingular, "steps": steps})


# -- leaf rank ---------------------------------------------------------------


@_timed
def leaf_ranks(max_n: int = 5) -> SuiteResult:
    """Known leaf ranks, plus every graph class up to max_n vertices."""
    known = [
        ("C4", cycle_graph(4), None),
        ("P3", path_graph(3), 3),
        ("K3", complete_graph(3), 2),
        ("K4", complete_graph(4), 2),
        ("K5", complete_graph(5), 2),
    ]
    for name, G, want in known:
        res = leaf_rank(G)
        got = res.k if res.finite else None
        if got != want:
            _fail(f"leaf rank of {name} is {got if got is not None else 'infinite'}, expected {want}")
        _check_leaf_result(G, res)
    finite = infinite = 0
    for G in atlas_graphs(max_n):
        if G.n < 2:
            continue
        res = leaf_rank(G)
        _check_leaf_result(G, res)
        if res.finite:
            finite += 1
        else:
            infinite += 1
    return SuiteResult("leafrank", {"known": len(known), "finite": finite, "infinite": infinite})


def _check_leaf_result(G: Graph, res) -> None:
    if not res.finite:
        return
    if not leaf_root_check(G, res.topology, res.lengths, res.k):
        _fail(f"witness fails the leaf-root check for {G.to_json_obj()}")
    if res.k > 2 * G.n * 2 ** (2 * G.n):
        _fail(f"leaf rank {res.k} above 2n 2^(2n) for {G.to_json_obj()}")


# -- exponent grid -------------------------------------------------------------

EXPONENT_TARGET = 1 / 3 + math.log(3) / (3 * math.log(2))


@_timed
def exponent(step: float = 1e-3) -> SuiteResult:
    """Grid maximum of the sparse-bound exponent sits at (1/3, 1/3)."""
    f, x, y = maximize_exponent_grid(step)
    if not 0.8606 <= f <= 0.8627:
        _fail(f"grid maximum {f} outside [0.8606, 0.8627]")
    if abs(x - 1 / 3) > 0.01 or abs(y - 1 / 3) > 0.01:
        _fail(f"argmax ({x}, {y}) not within 0.01 of (1/3, 1/3)")
    c = sparse_bound_constant(f)
    if not 1.3475 <= c <= 1.3487:
        _fail(f"bound constant {c} outside [1.3475, 1.3487]")
    return SuiteResult("exponent", {"max": round(f, 5), "x": round(x, 3), "y": round(y, 3), "constant": round(c, 4)})


SUITES = {
    "gram-tree": gram_tree,
    "gram-formula": gram_formula,
    "gram-bound": gram_bound,
    "gram-invariance": gram_invariance,
    "constructions": construction_dets,
    "search": search_oracle,
    "two-cop": two_cop,
    "paths": paths,
    "leafrank": leaf_ranks,
    "exponent": exponent,
}
