"""Path-edge incidence matrices of trees and the -2 column elimination.

Columns are indexed by the edges of a tree in a caller-chosen ``edge_order``;
rows by paths.  After rooting the tree, the ancestor transform subtracts from
every edge column the columns of its child edges; the resulting rows fall into
four shapes, and two rounds of half-row updates then isolate the -2 entries so
that every other row has Euclidean norm at most 2.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DomainError, InvariantViolation, UnclassifiableRow
from .graphs import Graph
from .linalg import squared_norm
from .matrix import ExactMatrix

Edge = tuple[int, int]


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class RootedTree:
    """A tree with a designated root; edges are identified with their lower (child) vertex."""

    def __init__(self, tree: Graph, root: int = 0):
        if not tree.is_tree():
            raise DomainError("RootedTree needs a tree")
        if not 0 <= root < tree.n:
            raise DomainError(f"root {root} not a vertex")
        self.graph = tree
        self.root = root
        self.n = tree.n
        adj = tree.adjacency()
        self.adj = adj
        self.parent = [-1] * tree.n
        self.depth = [0] * tree.n
        self.children: list[list[int]] = [[] for _ in range(tree.n)]
        self.bfs: list[int] = []
        seen = [False] * tree.n
        seen[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            self.bfs.append(u)
            for w in sorted(adj[u]):
                if not seen[w]:
                    seen[w] = True
                    self.parent[w] = u
                    self.depth[w] = self.depth[u] + 1
                    self.children[u].append(w)
                    queue.append(w)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    def child_of(self, e: Edge) -> int:
        u, v = e
        if self.parent[v] == u:
            return v
        if self.parent[u] == v:
            return u
        raise DomainError(f"{e} is not an edge of the tree")

    def edge_above(self, v: int) -> Edge | None:
        """The edge from v to its parent (None at the root)."""
        p = self.parent[v]
        return None if p < 0 else _key(v, p)

    def child_edges(self, e: Edge) -> list[Edge]:
        c = self.child_of(e)
        return [_key(c, w) for w in self.children[c]]

    def ancestor_edge(self, e: Edge) -> Edge | None:
        """The unique edge directly above e in the tree order (None if e hangs off the root)."""
        return self.edge_above(self.parent[self.child_of(e)])

    def is_ancestor(self, u: int, v: int) -> bool:
        """u is an ancestor of v or equal to it."""
        while v >= 0:
            if v == u:
                return True
            v = self.parent[v]
        return False

    def edge_leq(self, e: Edge, f: Edge) -> bool:
        return self.is_ancestor(self.child_of(e), self.child_of(f))

    def bfs_edges(self) -> list[Edge]:
        """Edges in breadth-first (non-decreasing tree) order."""
        return [_key(v, self.parent[v]) for v in self.bfs if self.parent[v] >= 0]

    def path(self, u: int, v: int) -> list[int]:
        """Vertex sequence of the unique u-v path."""
        left, right = [u], [v]
        a, b = u, v
        while self.depth[a] > self.depth[b]:
            a = self.parent[a]
            left.append(a)
        while self.depth[b] > self.depth[a]:
            b = self.parent[b]
            right.append(b)
        while a != b:
            a = self.parent[a]
            b = self.parent[b]
            left.append(a)
            right.append(b)
        right.pop()
        return left + right[::-1]

    def top(self, vertices: Sequence[int]) -> int:
        """The vertex of a path that is smallest in the tree order."""
        return min(vertices, key=lambda x: self.depth[x])

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if len(self.adj[v]) == 1]

    def to_text(self) -> str:
        return self.graph.to_text() + f"root {self.root}\n"

    @classmethod
    def from_text(cls, text: str) -> "RootedTree":
        root = 0
        for ln in text.splitlines():
            parts = ln.split("#", 1)[0].split()
            if parts and parts[0] == "root":
                root = int(parts[1])
        return cls(Graph.from_text(text), root)


@dataclass(frozen=True)
class PathFamily:
    paths: tuple[tuple[int, ...], ...]

    def __init__(self, paths: Iterable[Sequence[int]]):
        object.__setattr__(self, "paths", tuple(tuple(int(v) for v in p) for p in paths))

    def __len__(self):
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def validate(self, tree: Graph) -> None:
        edges = set(tree.edges)
        for p in self.paths:
            if len(p) < 2:
                raise DomainError(f"path {p} has no edge; single-vertex paths are not allowed")
            if len(set(p)) != len(p):
                raise DomainError(f"path {p} repeats a vertex")
            for a, b in zip(p, p[1:]):
                if _key(a, b) not in edges:
                    raise DomainError(f"path {p} uses non-edge ({a}, {b})")

    def edge_sets(self) -> list[set[Edge]]:
        return [{_key(a, b) for a, b in zip(p, p[1:])} for p in self.paths]

    @classmethod
    def from_endpoints(cls, T: RootedTree | Graph, pairs: Iterable[tuple[int, int]]) -> "PathFamily":
        rt = T if isinstance(T, RootedTree) else RootedTree(T)
        return cls(rt.path(u, v) for u, v in pairs)

    def to_text(self) -> str:
        return "".join(" ".join(map(str, p)) + "\n" for p in self.paths)

    @classmethod
    def from_text(cls, text: str) -> "PathFamily":
        lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        return cls([int(x) for x in ln] for ln in lines if ln)


def path_edge_matrix(T: Graph, P: PathFamily, edge_order: Sequence[Edge] | None = None) -> ExactMatrix:
    """0/1 matrix with entry (Q, e) = 1 iff edge e lies on path Q."""
    order = list(T.edges) if edge_order is None else [_key(*e) for e in edge_order]
    if sorted(order) != sorted(T.edges):
        raise DomainError("edge_order must be a permutation of the tree's edges")
    P.validate(T)
    rows = []
    for es in P.edge_sets():
        rows.append([1 if e in es else 0 for e in order])
    return ExactMatrix.from_ints(rows)


def ancestor_transform(A: ExactMatrix, T: RootedTree, edge_order: Sequence[Edge] | None = None) -> ExactMatrix:
    """Subtract from every edge column the columns of its child edges.

    Edges are visited in BFS order, so the child columns are still the original
    ones when they are subtracted.
    """
    order = list(T.edges) if edge_order is None else [_key(*e) for e in edge_order]
    if A.ncols != len(order):
        raise DomainError("matrix columns do not match the edge order")
    index = {e: j for j, e in enumerate(order)}
    kids = [[index[c] for c in T.child_edges(e)] for e in order]
    out = []
    for r in A.rows:
        out.append(tuple(r[j] - sum(r[c] for c in kids[j]) for j in range(len(order))))
    return ExactMatrix(out, ncols=len(order))


# -- row classification -------------------------------------------------

INCOMPARABLE_BELOW_ROOT = "incomparable, avoids root"
THROUGH_ROOT = "incomparable, through root"
COMPARABLE_BELOW_ROOT = "comparable, avoids root"
ENDS_AT_ROOT = "comparable, ends at root"
CASES = (INCOMPARABLE_BELOW_ROOT, THROUGH_ROOT, COMPARABLE_BELOW_ROOT, ENDS_AT_ROOT)


def expected_transformed_row(path: Sequence[int], T: RootedTree, order: Sequence[Edge]) -> tuple[str, dict]:
    """Case label and sparse expected row {edge: value} for one path."""
    t = T.top(path)
    ends = (path[0], path[-1])
    lower_ends = [v for v in ends if v != t]
    leaf_edges = [T.edge_above(v) for v in lower_ends]
    if t in ends:
        # both leaf-edges on one root-ward chain; the lower one carries the +1
        low = lower_ends[0]
        if t == T.root:
            return ENDS_AT_ROOT, {T.edge_above(low): 1}
        return COMPARABLE_BELOW_ROOT, {T.edge_above(t): -1, T.edge_above(low): 1}
    row = {leaf_edges[0]: 1, leaf_edges[1]: 1}
    if t == T.root:
        return THROUGH_ROOT, row
    row[T.edge_above(t)] = -2
    return INCOMPARABLE_BELOW_ROOT, row


def classify_transformed_rows(
    At: ExactMatrix, T: RootedTree, P: PathFamily, edge_order: Sequence[Edge] | None = None
) -> list[str]:
    """Label every row of an ancestor-transformed matrix with one of the four cases."""
    order = list(T.edges) if edge_order is None else [_key(*e) for e in edge_order]
    index = {e: j for j, e in enumerate(order)}
    labels = []
    for i, (path, row) in enumerate(zip(P.paths, At.rows)):
        label, sparse = expected_transformed_row(path, T, order)
        expect = [0] * len(order)
        for e, v in sparse.items():
            expect[index[e]] = v
        if tuple(expect) != tuple(row):
            raise UnclassifiableRow(f"row {i} {row} matches no case for path {path}")
        labels.append(label)
    F = {j for j in range(At.ncols) if any(r[j] == -2 for r in At.rows)}
    leq = edge_leq_matrix(T, order)
    for i, row in enumerate(At.rows):
        bad = row_property_violations(row, leq, F)
        if bad:
            raise UnclassifiableRow(f"row {i} violates properties {bad}")
    return labels


def edge_leq_matrix(T: RootedTree, order: Sequence[Edge]) -> list[list[bool]]:
    return [[T.edge_leq(e, f) for f in order] for e in order]


def row_property_violations(row: Sequence, leq: list[list[bool]], F: set[int]) -> list[str]:
    """Which of the properties (i)-(v) a transformed row breaks (empty list if none)."""
    bad = []
    pos = [j for j, v in enumerate(row) if v > 0]
    neg = [j for j, v in enumerate(row) if v < 0]
    if any(leq[a][b] or leq[b][a] for a, b in itertools.combinations(pos, 2)):
        bad.append("i")
    if len(neg) > 1 or any(row[j] == -2 and j not in F for j in neg):
        bad.append("ii")
    if any(not leq[e][f] for e in neg for f in pos):
        bad.append("iii")
    if any(v != -2 and abs(v) > 1 for v in row):
        bad.append("iv")
    if sum(row[j] for j in pos) > 2:
        bad.append("v")
    return bad


# -- elimination pipeline -----------------------------------------------


@dataclass
class ReductionState:
    matrix: ExactMatrix
    F: tuple[int, ...]  # column indices holding a -2 after the ancestor transform
    Rset: tuple[int, ...]
    Sset: tuple[int, ...]
    updates: list[tuple[str, int, int, Fraction]] = field(default_factory=list)  # (phase, Q, P, factor)
    trace: list[ExactMatrix] = field(default_factory=list)

    def final_bound(self) -> float:
        """2^|R| times the Hadamard product of every row outside R."""
        rows = self.matrix.rows
        prod = 2.0 ** len(self.Rset)
        for i, r in enumerate(rows):
            if i not in self.Rset:
                prod *= math.sqrt(float(squared_norm(r)))
        return prod


def _r_and_s(rows: list[list], F: Sequence[int]) -> tuple[set[int], set[int]]:
    m = len(rows)
    R = set()
    ncols = len(rows[0]) if rows else 0
    for j in range(ncols):
        nz = [i for i in range(m) if rows[i][j] != 0]
        if len(nz) == 1 and rows[nz[0]][j] == -2:
            R.add(nz[0])
    S = set()
    for i, r in enumerate(rows):
        if all(r[j] == 0 for j in F) and squared_norm(r) <= 4:
            S.add(i)
    return R, S


def reduce_path_matrix(
    At: ExactMatrix,
    T: RootedTree,
    edge_order: Sequence[Edge] | None = None,
    trace: bool = False,
    check: bool = True,
) -> ReductionState:
    """Eliminate positive entries from -2 columns, then isolate the -2 rows.

    Phase 1: for the first F-column (BFS order) still holding a positive entry
    alpha in row Q, add alpha/2 times a row P with -2 there to row Q.
    Phase 2: while a row outside R(B) u S(B) carries a -2 at e, take another row
    Q non-zero at e (beta = B[Q, e] < 0) and add beta/2 times P to Q.
    Every update is a determinant-preserving row operation.
    """
    order = list(T.edges) if edge_order is None else [_key(*e) for e in edge_order]
    if At.ncols != len(order):
        raise DomainError("matrix columns do not match the edge order")
    rows: list[list] = [[Fraction(v) for v in r] for r in At.rows]
    m = len(rows)
    leq = edge_leq_matrix(T, order)
    rank = {e: i for i, e in enumerate(T.bfs_edges())}
    F = sorted((j for j in range(len(order)) if any(r[j] == -2 for r in rows)), key=lambda j: rank[order[j]])
    Fset = set(F)
    state = ReductionState(At, tuple(F), (), ())

    def snapshot():
        if trace:
            state.trace.append(ExactMatrix(rows, ncols=len(order)))

    def verify(which: Iterable[int], stage: str):
        if not check:
            return
        for i in which:
            bad = row_property_violations(rows[i], leq, Fset)
            if bad:
                raise InvariantViolation(f"{stage}: row {i} violates properties {bad}")

    verify(range(m), "input")
    snapshot()

    # phase 1
    while True:
        col = next((j for j in F if any(r[j] > 0 for r in rows)), None)
        if col is None:
            break
        p = next((i for i in range(m) if rows[i][col] == -2), None)
        if p is None:
            raise InvariantViolation(f"column {col} lost its -2 entry")
        q = next(i for i in range(m) if rows[i][col] > 0)
        alpha = rows[q][col]
        rows[q] = [a + alpha / 2 * b for a, b in zip(rows[q], rows[p])]
        state.updates.append(("phase1", q, p, alpha / 2))
        verify([q], "phase 1")
        snapshot()
    if any(r[j] > 0 for r in rows for j in F):
        raise InvariantViolation("positive entry left in a -2 column")

    # phase 2
    R, S = _r_and_s(rows, F)
    while True:
        pick = None
        for i in range(m):
            if i in R or i in S:
                continue
            e = next((j for j in range(len(order)) if rows[i][j] == -2), None)
            if e is not None:
                pick = (i, e)
                break
        if pick is None:
            break
        p, e = pick
        q = next((i for i in range(m) if i != p and rows[i][e] != 0), None)
        if q is None:
            raise InvariantViolation(f"row {p} should be in R")
        beta = rows[q][e]
        if not beta < 0:
            raise InvariantViolation(f"positive entry at ({q}, {e}) in a -2 column")
        rows[q] = [a + beta / 2 * b for a, b in zip(rows[q], rows[p])]
        state.updates.append(("phase2", q, p, beta / 2))
        R2, S2 = _r_and_s(rows, F)
        if not (R | S) < (R2 | S2):
            raise InvariantViolation("R u S did not grow")
        R, S = R2, S2
        verify([i for i in range(m) if i not in R and i not in S], "phase 2")
        snapshot()

    for i in range(m):
        if i not in R and squared_norm(rows[i]) > 4:
            raise InvariantViolation(f"row {i} outside R has norm > 2")
    state.matrix = ExactMatrix(rows, ncols=len(order))
    state.Rset = tuple(sorted(R))
    state.Sset = tuple(sorted(S))
    return state


def choose_root(T: Graph, P: PathFamily, strategy: str = "default") -> int:
    """Root vertex: 0 by default; ``"leaf"`` picks a leaf where at least two paths end, if any."""
    if strategy == "default":
        return 0
    if strategy == "leaf":
        adj = T.adjacency()
        ends = [0] * T.n
        for p in P.paths:
            ends[p[0]] += 1
            ends[p[-1]] += 1
        for v in range(T.n):
            if len(adj[v]) == 1 and ends[v] >= 2:
                return v
        return 0
    raise DomainError(f"unknown root strategy {strategy!r}")


# -- extremal instance ----------------------------------------------------


def extremal_path_instance(d: int) -> tuple[RootedTree, PathFamily, int]:
    """Cubic tree with all leaves at depth d from the root, and n - 1 paths with
    |det A(P, T)| = 2^((2n - 5)/3)."""
    if d < 1:
        raise DomainError("depth must be at least 1")
    edges = []
    children: dict[int, list[int]] = {}
    level = [0]
    nxt = 1
    for depth in range(d):
        new_level = []
        for u in level:
            k = 3 if depth == 0 else 2
            children[u] = list(range(nxt, nxt + k))
            for c in children[u]:
                edges.append((u, c))
            new_level += children[u]
            nxt += k
        level = new_level
    n = nxt
    T = RootedTree(Graph(n, edges), 0)

    def first_leaf(v: int) -> int:
        while v in children:
            v = children[v][0]
        return v

    def leaves_below(v: int) -> list[int]:
        if v not in children:
            return [v]
        return [x for c in children[v] for x in leaves_below(c)]

    pairs = []
    # P_I: one leaf-leaf path turning at v for every internal non-root v
    for v in T.bfs:
        if v != 0 and v in children:
            a, b = children[v]
            pairs.append((first_leaf(a), first_leaf(b)))
    n_internal = len(pairs)
    # P_L: triangles on the i-th leaf of each root subtree
    subtrees = [leaves_below(c) for c in children[0]]
    for a, b, c in zip(*subtrees):
        pairs += [(a, b), (b, c), (c, a)]
    n_leafpaths = len(pairs) - n_internal
    P = PathFamily.from_endpoints(T, pairs)
    exponent = n_internal + n_leafpaths // 3
    if len(P) != n - 1 or 3 * exponent != 2 * n - 5:
        raise InvariantViolation(f"instance of depth {d} has the wrong shape")
    return T, P, 2**exponent


# -- realizability ----------------------------------------------------------

REALIZABILITY_MAX_N = 5


def _path_masks(tree: Graph) -> set[int]:
    index = {e: j for j, e in enumerate(tree.edges)}
    rt = RootedTree(tree, 0)
    masks = set()
    for u, v in itertools.combinations(range(tree.n), 2):
        p = rt.path(u, v)
        mask = 0
        for a, b in zip(p, p[1:]):
            mask |= 1 << index[_key(a, b)]
        masks.add(mask)
    return masks


def find_realization(M: ExactMatrix):
    """Search for (tree, edge_order, paths) with A(P, T) == M; None if impossible."""
    if not M.is_01():
        raise DomainError("realizability is defined for 0/1 matrices")
    m = M.ncols
    if m > REALIZABILITY_MAX_N or M.nrows > REALIZABILITY_MAX_N:
        raise BudgetExceeded(f"realizability search limited to {REALIZABILITY_MAX_N} columns")
    if m == 0 or any(not any(r) for r in M.rows):
        return None
    import networkx as nx

    for H in nx.nonisomorphic_trees(m + 1) if m >= 1 else []:
        tree = Graph(m + 1, H.edges())
        masks = _path_masks(tree)
        for perm in itertools.permutations(range(m)):
            # column j of M is tree edge perm[j]
            ok = True
            for r in M.rows:
                mask = 0
                for j, v in enumerate(r):
                    if v:
                        mask |= 1 << perm[j]
                if mask not in masks:
                    ok = False
                    break
            if ok:
                order = [tree.edges[perm[j]] for j in range(m)]
                rt = RootedTree(tree, 0)
                paths = []
                for r in M.rows:
                    es = {order[j] for j, v in enumerate(r) if v}
                    verts = {x for e in es for x in e}
                    ends = [x for x in verts if sum(1 for e in es if x in e) == 1]
                    paths.append(rt.path(ends[0], ends[1]))
                return tree, order, PathFamily(paths)
    return None


def is_realizable(M: ExactMatrix) -> bool:
    return find_realization(M) is not None


NON_REALIZABLE_2COP = ExactMatrix.from_ints([[1, 1, 1, 1], [1, 1, 1, 0], [0, 1, 1, 1], [1, 0, 0, 1]])


def random_path_family(T: Graph, count: int, rng: random.Random) -> PathFamily:
    """``count`` paths between random distinct endpoints (distinct pairs while possible)."""
    rt = RootedTree(T, 0)
    pairs = list(itertools.combinations(range(T.n), 2))
    if count <= len(pairs):
        chosen = rng.sample(pairs, count)
    else:
        chosen = [rng.choice(pairs) for _ in range(count)]
    return PathFamily(rt.path(u, v) for u, v in chosen)
