"""Exact leaf rank of small graphs.

For every leaf-labelled tree topology T (no internal vertex of degree 2) the
system I(T) asks for edge lengths l_e >= 1 and a threshold k with

    l(uTv) - k <= 0   for adjacent u, v
    l(uTv) - k >= 1   for non-adjacent u, v.

A rational solution on some topology means finite leaf rank (scale by the
common denominator to get an integral one); no solution on any topology means
infinite leaf rank.  The minimum integral k is then found by a per-k
depth-first search over integral lengths.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BudgetExceeded, DomainError
from .graphs import Graph
from .linalg import BoundValue
from .lp import OPTIMAL, solve_lp

LEAF_RANK_MAX_N = 7


# -- topologies --------------------------------------------------------------


def _insert_leaf(n_leaves: int, edges: list[tuple[int, int]], n_vertices: int, internal: list[int]):
    """All trees obtained by hanging a new leaf off an internal vertex or an edge.

    Vertices: leaves 0..n_leaves-1 keep their labels; internal vertices carry
    labels >= 1000 during generation (relabelled later).
    """
    new = n_leaves
    for v in internal:
        yield edges + [(v, new)], internal
    fresh = 1000 + len(internal)
    for idx, (a, b) in enumerate(edges):
        rest = edges[:idx] + edges[idx + 1 :]
        yield rest + [(a, fresh), (fresh, b), (fresh, new)], internal + [fresh]


def _relabel(n: int, edges: list[tuple[int, int]], internal: list[int]) -> Graph:
    mapping = {v: n + i for i, v in enumerate(internal)}
    return Graph(n + len(internal), [(mapping.get(a, a), mapping.get(b, b)) for a, b in edges])


def _labeled_topologies(n: int) -> Iterator[Graph]:
    if n < 2:
        raise DomainError("topologies need at least 2 leaves")

    def grow(k: int, edges, internal):
        if k == n:
            yield _relabel(n, edges, internal)
            return
        for e2, i2 in _insert_leaf(k, edges, k, internal):
            yield from grow(k + 1, e2, i2)

    yield from grow(2, [(0, 1)], [])


def canonical_form(T: Graph, n_leaves: int, use_leaf_labels: bool = True) -> str:
    """AHU canonical string of a tree, optionally keeping the labels of vertices < n_leaves."""
    adj = T.adjacency()
    if T.n == 1:
        return "()"
    # centres by repeated leaf stripping
    deg = [len(a) for a in adj]
    layer = [v for v in range(T.n) if deg[v] <= 1]
    remaining = T.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    centres = layer

    def enc(v: int, parent: int) -> str:
        kids = sorted(enc(w, v) for w in adj[v] if w != parent)
        tag = str(v) if use_leaf_labels and v < n_leaves else ""
        return f"({tag}{''.join(kids)})"

    return min(enc(c, -1) for c in centres)


def enumerate_topologies(n: int, labeled: bool = True) -> Iterator[Graph]:
    """Trees with leaf set {0..n-1} and no internal vertex of degree 2.

    With ``labeled=True`` (what the leaf-rank search needs) every leaf-labelled
    topology appears exactly once; internal vertices are numbered n, n+1, ...
    With ``labeled=False`` one representative per unlabelled shape is yielded.
    """
    if labeled:
        yield from _labeled_topologies(n)
        return
    seen = set()
    for T in _labeled_topologies(n):
        key = canonical_form(T, n, use_leaf_labels=False)
        if key not in seen:
            seen.add(key)
            yield T


# -- linear system --------------------------------------------------------


@dataclass(frozen=True)
class PairRow:
    u: int
    v: int
    adjacent: bool
    edges: tuple[int, ...]  # indices into LinearSystem.edges along uTv


@dataclass(frozen=True)
class LinearSystem:
    """I(T): one row per unordered vertex pair; variables (l_e for e in edges, k)."""

    n_leaves: int
    topology: Graph
    edges: tuple[tuple[int, int], ...]
    pairs: tuple[PairRow, ...]

    @property
    def n_vars(self) -> int:
        return len(self.edges) + 1

    def rows(self) -> list[tuple[tuple[int, ...], str, int]]:
        """Dense rows (coefficients over l_e..., k; sense; rhs)."""
        out = []
        for p in self.pairs:
            coef = [0] * self.n_vars
            for j in p.edges:
                coef[j] = 1
            coef[-1] = -1
            out.append((tuple(coef), "<=" if p.adjacent else ">=", 0 if p.adjacent else 1))
        return out

    def satisfied_by(self, point: Sequence, min_length=1) -> bool:
        *ell, k = point
        if any(x < min_length for x in ell) or k < 0:
            return False
        for p in self.pairs:
            s = sum(ell[j] for j in p.edges) - k
            if p.adjacent and s > 0:
                return False
            if not p.adjacent and s < 1:
                return False
        return True


def _tree_path_edges(T: Graph, u: int, v: int, index: dict) -> tuple[int, ...]:
    adj = T.adjacency()
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for w in adj[x]:
            if w not in prev:
                prev[w] = x
                queue.append(w)
    out = []
    x = v
    while prev[x] is not None:
        p = prev[x]
        out.append(index[(p, x) if p < x else (x, p)])
        x = p
    return tuple(sorted(out))


def _check_leaves(G: Graph, T: Graph) -> None:
    adj = T.adjacency()
    leaves = {v for v in range(T.n) if len(adj[v]) == 1} if T.n > 1 else {0}
    if leaves != set(range(G.n)):
        raise DomainError(f"leaf set of the tree {sorted(leaves)} is not V(G) = 0..{G.n - 1}")


def build_system(G: Graph, T: Graph) -> LinearSystem:
    _check_leaves(G, T)
    index = {e: j for j, e in enumerate(T.edges)}
    adj_pairs = set(G.edges)
    pairs = []
    for u, v in itertools.combinations(range(G.n), 2):
        pairs.append(PairRow(u, v, (u, v) in adj_pairs, _tree_path_edges(T, u, v, index)))
    return LinearSystem(G.n, T, T.edges, tuple(pairs))


def _lp_data(S: LinearSystem, fixed_k: int | None = None):
    """Substitute l_e = 1 + y_e (y >= 0) and write every row as A z <= b."""
    m = len(S.edges)
    A, b = [], []
    for p in S.pairs:
        coef = [0] * (m + 1)
        for j in p.edges:
            coef[j] = 1
        coef[m] = -1
        base = len(p.edges)
        if p.adjacent:  # sum y + base - k <= 0
            A.append(coef)
            b.append(-base)
        else:  # sum y + base - k >= 1
            A.append([-x for x in coef])
            b.append(base - 1)
    if fixed_k is not None:
        A.append([0] * m + [1])
        b.append(fixed_k)
        A.append([0] * m + [-1])
        b.append(-fixed_k)
    return A, b


def min_k_point(S: LinearSystem, fixed_k: int | None = None) -> tuple[Fraction, ...] | None:
    """A vertex of P(T) (with l_e >= 1) minimizing k, or None if the system is infeasible."""
    A, b = _lp_data(S, fixed_k)
    m = len(S.edges)
    res = solve_lp([0] * m + [1], A, b)
    if res.status != OPTIMAL:
        return None
    y = res.x
    return tuple(Fraction(1) + y[j] for j in range(m)) + (y[m],)


def feasible_rational(S: LinearSystem) -> tuple[Fraction, ...] | None:
    """Exact rational point (l_e >= 1, k) satisfying I(T), or None."""
    return min_k_point(S)


def integralize(x: Sequence, S: LinearSystem | None = None) -> tuple[int, tuple[int, ...]]:
    """Scale a feasible rational point by the lcm of its denominators.

    Scaling by lam >= 1 keeps l(uTv) - k <= 0, turns >= 1 into >= lam, and keeps
    l_e >= 1, so the result stays feasible.
    """
    lam = 1
    for v in x:
        lam = lam * Fraction(v).denominator // math.gcd(lam, Fraction(v).denominator)
    point = tuple(int(Fraction(v) * lam) for v in x)
    if S is not None and not S.satisfied_by(point):
        raise DomainError("integralize was given an infeasible point")
    return lam, point


def integer_lengths_at(S: LinearSystem, k: int) -> tuple[int, ...] | None:
    """Integral lengths in [1, k+1] satisfying I(T) at threshold k, by depth-first search.

    Lengths above k+1 are never needed: such an edge lies on no adjacent pair's
    path, and shrinking it to k+1 keeps every non-adjacent constraint through it.
    """
    m = len(S.edges)
    if k < 0:
        return None
    cons_of = [[] for _ in range(m)]
    for ci, p in enumerate(S.pairs):
        for j in p.edges:
            cons_of[j].append(ci)
    order = sorted(range(m), key=lambda j: -len(cons_of[j]))
    sums = [0] * len(S.pairs)
    free = [len(p.edges) for p in S.pairs]
    adjacent = [p.adjacent for p in S.pairs]
    for ci, p in enumerate(S.pairs):
        if adjacent[ci] and free[ci] > k:
            return None
        if not p.edges and not adjacent[ci]:
            return None
    ell = [0] * m
    hi = k + 1

    def ok(ci: int) -> bool:
        if adjacent[ci]:
            return sums[ci] + free[ci] <= k
        return sums[ci] + free[ci] * hi >= k + 1

    def dfs(pos: int) -> bool:
        if pos == m:
            return True
        j = order[pos]
        for val in range(1, hi + 1):
            for ci in cons_of[j]:
                sums[ci] += val
                free[ci] -= 1
            if all(ok(ci) for ci in cons_of[j]) and dfs(pos + 1):
                ell[j] = val
                return True
            for ci in cons_of[j]:
                sums[ci] -= val
                free[ci] += 1
        return False

    if dfs(0):
        return tuple(ell)
    return None


# -- verification ---------------------------------------------------------


def subdivide(T: Graph, lengths: Sequence[int]) -> Graph:
    """Replace every edge e of T by a path of lengths[e] unit edges."""
    edges = []
    nxt = T.n
    for (a, b), ell in zip(T.edges, lengths):
        if ell < 1:
            raise DomainError("edge lengths must be positive integers")
        chain = [a] + list(range(nxt, nxt + ell - 1)) + [b]
        nxt += ell - 1
        edges += list(zip(chain, chain[1:]))
    return Graph(nxt, edges)


def leaf_root_check(G: Graph, T: Graph, lengths: Sequence[int], k: int) -> bool:
    """Is T, with edge e subdivided into lengths[e] unit edges, a k-leaf root of G?"""
    _check_leaves(G, T)
    if len(lengths) != T.m:
        raise DomainError("one length per tree edge required")
    U = subdivide(T, lengths)
    adj = U.adjacency()
    adjacent = set(G.edges)
    for u in range(G.n):
        dist = [-1] * U.n
        dist[u] = 0
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if dist[w] < 0:
                    dist[w] = dist[x] + 1
                    queue.append(w)
        for v in range(u + 1, G.n):
            if ((u, v) in adjacent) != (dist[v] <= k):
                return False
    return True


# -- leaf rank --------------------------------------------------------------


@dataclass
class LeafRankResult:
    outcome: str  # "finite" | "infinite"
    k: int | None = None
    topology: Graph | None = None
    lengths: tuple[int, ...] | None = None
    note: str = ""
    topologies_checked: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return self.outcome == "finite"

    def to_json_obj(self) -> dict:
        if not self.finite:
            return {"outcome": "infinite"}
        obj = {
            "outcome": "finite",
            "k": self.k,
            "topology": self.topology.to_json_obj(),
            "lengths": {f"{a}-{b}": ell for (a, b), ell in zip(self.topology.edges, self.lengths)},
        }
        if self.note:
            obj["note"] = self.note
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def leaf_rank_upper_bound(n: int) -> BoundValue:
    if n < 1:
        raise DomainError("n must be positive")
    return BoundValue(float(2 * n * 2 ** (2 * n)), f"leaf rank: 2n 2^(2n), n={n}")


def leaf_rank(G: Graph) -> LeafRankResult:
    """Minimum k such that G has a k-leaf root, or infinite."""
    n = G.n
    if n > LEAF_RANK_MAX_N:
        raise BudgetExceeded(f"leaf rank search limited to {LEAF_RANK_MAX_N} vertices")
    if n == 0:
        raise DomainError("empty graph")
    if n == 1:
        return LeafRankResult("finite", 1, Graph(1, []), (), note="K1: leaf rank 1 by convention")

    candidates = []
    checked = 0
    upper = None
    for T in enumerate_topologies(n):
        checked += 1
        S = build_system(G, T)
        x = min_k_point(S)
        if x is None:
            continue
        lam, z = integralize(x, S)
        upper = z[-1] if upper is None else min(upper, z[-1])
        candidates.append((x[-1], T, S))
    if not candidates:
        return LeafRankResult("infinite", topologies_checked=checked)

    for k in range(1, max(upper, 1) + 1):
        for lp_min, T, S in candidates:
            if k < lp_min:
                continue
            ell = integer_lengths_at(S, k)
            if ell is not None:
                return LeafRankResult(
                    "finite", k, T, ell, topologies_checked=checked,
                    stats={"feasible_topologies": len(candidates), "integral_upper": upper},
                )
    raise AssertionError("integralized LP point should have been found")  # pragma: no cover
