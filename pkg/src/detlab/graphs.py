"""Simple graphs, edge-vertex incidence matrices and their Gram determinants."""

from __future__ import annotations

import heapq
import itertools
import json
import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DomainError
from .linalg import BoundValue, bareiss_det, batch_bareiss_det, gram_determinant
from .matrix import ExactMatrix


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        norm = []
        seen = set()
        for e in edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise DomainError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DomainError(f"parallel edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in set(self.edges)

    def components(self) -> list[list[int]]:
        """Vertex sets of the connected components, each sorted, in order of least vertex."""
        adj = self.adjacency()
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def is_bipartite(self) -> bool:
        adj = self.adjacency()
        color = [-1] * self.n
        for s in range(self.n):
            if color[s] >= 0:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if color[w] < 0:
                        color[w] = 1 - color[u]
                        stack.append(w)
                    elif color[w] == color[u]:
                        return False
        return True

    def induced(self, vertices: list[int]) -> "Graph":
        """Induced subgraph, relabelled 0..len(vertices)-1 in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            [(index[u], index[v]) for u, v in self.edges if u in index and v in index],
        )

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        return Graph(self.n + other.n, list(self.edges) + [(u + shift, v + shift) for u, v in other.edges])

    # -- serialization --------------------------------------------------
    def to_text(self) -> str:
        return "\n".join([str(self.n)] + [f"{u} {v}" for u, v in self.edges]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise DomainError("empty graph text")
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "root":
                continue
            if len(parts) != 2:
                raise DomainError(f"bad edge line {ln!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return cls(n, edges)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Graph":
        return cls(obj["n"], obj["edges"])

    @classmethod
    def parse(cls, text: str) -> "Graph":
        if text.lstrip().startswith("{"):
            return cls.from_json_obj(json.loads(text))
        return cls.from_text(text)


# -- named graphs ---------------------------------------------------------


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def empty_graph(n: int) -> Graph:
    return Graph(n, [])


# -- incidence / Gramian ---------------------------------------------------


def incidence_matrix(G: Graph) -> ExactMatrix:
    """m x n edge-vertex incidence matrix (one row per edge, two ones per row)."""
    if G.m == 0:
        raise DomainError("incidence matrix of a graph without edges")
    rows = []
    for u, v in G.edges:
        r = [0] * G.n
        r[u] = 1
        r[v] = 1
        rows.append(r)
    return ExactMatrix.from_ints(rows)


def brute_gram_det(G: Graph) -> int:
    return gram_determinant(incidence_matrix(G))


def gram_det_formula(G: Graph) -> int:
    """Closed form of det(I I^T) for a connected graph: n (tree), 0, or 4 (odd unicyclic)."""
    if G.m == 0:
        raise DomainError("graph has no edges")
    if not G.is_connected():
        raise DomainError("gram_det_formula needs a connected graph; decompose first")
    if G.m == G.n - 1:
        return G.n
    if G.m > G.n:
        return 0
    # unicyclic: the single cycle is odd iff the graph is not bipartite
    return 0 if G.is_bipartite() else 4


def gram_det(G: Graph) -> int:
    """Product of the component formula over the components that carry edges."""
    if G.m == 0:
        raise DomainError("graph has no edges")
    total = 1
    for comp in G.components():
        if len(comp) < 2:
            continue
        total *= gram_det_formula(G.induced(comp))
    return total


def lemma_gram_bound(n: int, m: int) -> BoundValue:
    """Bound on det(I I^T) for a graph of order n with at most m (>= 1) edges."""
    if m < 1:
        raise DomainError("edge budget must be at least 1")
    if 2 * m <= n:
        return BoundValue(float(2**m), f"gram: 2^m, n={n}, m={m}")
    return BoundValue(2 ** ((n + m) / 3), f"gram: 2^((n+m)/3), n={n}, m={m}")


def extremal_gram_graph(n: int, m: int) -> Graph:
    """A graph on n vertices with m edges whose Gram determinant meets the bound exactly.

    m <= n/2: m disjoint edges plus isolated vertices.
    n/2 <= m <= n with 3 | 2m - n: (n - m) edges plus (2m - n)/3 triangles.
    """
    if m < 1:
        raise DomainError("m must be at least 1")
    edges = []
    if 2 * m <= n:
        edges = [(2 * i, 2 * i + 1) for i in range(m)]
        return Graph(n, edges)
    if m > n or (2 * m - n) % 3:
        raise DomainError(f"no tight extremal graph for n={n}, m={m}")
    n_k2 = n - m
    n_k3 = (2 * m - n) // 3
    edges = [(2 * i, 2 * i + 1) for i in range(n_k2)]
    base = 2 * n_k2
    for t in range(n_k3):
        a = base + 3 * t
        edges += [(a, a + 1), (a + 1, a + 2), (a, a + 2)]
    return Graph(n, edges)


def extremal_gram_value(n: int, m: int) -> int:
    """Exact integer value of the Gram bound in the tight regimes."""
    if 2 * m <= n:
        return 2**m
    return 2 ** ((n + m) // 3)


@dataclass(frozen=True)
class ComponentProfile:
    k1: int
    k2: int
    k3: int
    other: tuple[tuple[int, int], ...]  # (order, size) of every remaining component with edges
    isolated: int

    @property
    def small_only(self) -> bool:
        return not self.other

    def predicted_gram_det(self) -> int:
        """2^k1 3^k2 4^k3; meaningful only when every component is K2, P3 or K3."""
        return 2**self.k1 * 3**self.k2 * 4**self.k3


def component_profile(G: Graph) -> ComponentProfile:
    k1 = k2 = k3 = iso = 0
    other = []
    for comp in G.components():
        H = G.induced(comp)
        if H.m == 0:
            iso += 1
        elif H.n == 2:
            k1 += 1
        elif H.n == 3 and H.m == 2:
            k2 += 1
        elif H.n == 3 and H.m == 3:
            k3 += 1
        else:
            other.append((H.n, H.m))
    return ComponentProfile(k1, k2, k3, tuple(other), iso)


# -- enumeration ------------------------------------------------------------


def prufer_edges(seq, n: int) -> list[tuple[int, int]]:
    """Edge list of the labelled tree with Prüfer sequence ``seq``."""
    if n == 2:
        return [(0, 1)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return edges


def prufer_decode(seq, n: int) -> Graph:
    return Graph(n, prufer_edges(seq, n))


def edge_list_gram_det(n: int, edges) -> int:
    """det(I I^T) for the incidence matrix I of an edge list.

    Same value as :func:`brute_gram_det` computed on plain lists; used by the
    large enumeration sweeps.
    """
    # rows are indicator vectors of {u, v}, so <row i, row j> counts shared endpoints
    edges = list(edges)
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise DomainError(f"bad edge ({u}, {v})")
    g = [[(a == c) + (a == d) + (b == c) + (b == d) for c, d in edges] for a, b in edges]
    return bareiss_det(g)


def edge_lists_gram_dets(edge_lists) -> list[int]:
    """:func:`edge_list_gram_det` for many edge lists of equal length at once."""
    import numpy as np

    E = np.array(edge_lists, dtype=np.int64)
    if E.size == 0:
        return [edge_list_gram_det(0, es) for es in edge_lists]
    u, v = E[:, :, 0], E[:, :, 1]
    if (u == v).any():
        raise DomainError("edge list contains a loop")
    g = (
        (u[:, :, None] == u[:, None, :]).astype(np.int64)
        + (u[:, :, None] == v[:, None, :])
        + (v[:, :, None] == u[:, None, :])
        + (v[:, :, None] == v[:, None, :])
    )
    return batch_bareiss_det(g)


def tree_count(n: int) -> int:
    return n ** (n - 2)


def enumerate_trees(n: int, start: int = 0, stop: int | None = None) -> Iterator[Graph]:
    """All n^(n-2) labelled trees on n vertices via Prüfer sequences.

    ``start``/``stop`` select a slice of the Prüfer index space (lexicographic
    order) so that consumers can partition the work.
    """
    if n < 2:
        raise DomainError("trees need at least 2 vertices")
    total = tree_count(n)
    stop = total if stop is None else min(stop, total)
    seqs = itertools.product(range(n), repeat=n - 2)
    for seq in itertools.islice(seqs, start, stop):
        yield prufer_decode(seq, n)


def random_tree(n: int, rng: random.Random) -> Graph:
    if n == 2:
        return Graph(2, [(0, 1)])
    return prufer_decode([rng.randrange(n) for _ in range(n - 2)], n)


def enumerate_graphs(n: int, max_edges: int | None = None) -> Iterator[Graph]:
    """Every labelled simple graph on n vertices (optionally with at most max_edges edges)."""
    pairs = list(itertools.combinations(range(n), 2))
    top = len(pairs) if max_edges is None else min(max_edges, len(pairs))
    for m in range(top + 1):
        for es in itertools.combinations(pairs, m):
            yield Graph(n, es)


def connected_graphs(n: int, max_edges: int | None = None) -> Iterator[Graph]:
    for G in enumerate_graphs(n, max_edges):
        if G.m >= n - 1 and G.is_connected():
            yield G


def atlas_graphs(max_n: int = 7) -> Iterator[Graph]:
    """One representative per isomorphism class of graphs on 1..max_n vertices."""
    if max_n > 7:
        raise DomainError("the graph atlas covers at most 7 vertices")
    import networkx as nx

    for H in nx.graph_atlas_g():
        k = H.number_of_nodes()
        if 1 <= k <= max_n:
            yield Graph(k, H.edges())
