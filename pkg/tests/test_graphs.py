import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from detlab.errors import DomainError
from detlab.graphs import (
    Graph,
    atlas_graphs,
    brute_gram_det,
    complete_graph,
    component_profile,
    connected_graphs,
    cycle_graph,
    edge_list_gram_det,
    edge_lists_gram_dets,
    empty_graph,
    enumerate_graphs,
    enumerate_trees,
    extremal_gram_graph,
    extremal_gram_value,
    gram_det,
    gram_det_formula,
    incidence_matrix,
    lemma_gram_bound,
    path_graph,
    prufer_decode,
    random_tree,
    star_graph,
    tree_count,
)
from detlab.linalg import det_exact

from oracles import gram_by_hand, leibniz_det


def test_graph_validation():
    with pytest.raises(DomainError):
        Graph(3, [(0, 0)])
    with pytest.raises(DomainError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(DomainError):
        Graph(2, [(0, 2)])
    assert Graph(3, [(2, 1)]).edges == ((1, 2),)


def test_graph_text_and_json():
    G = cycle_graph(4)
    assert Graph.from_text(G.to_text()) == G
    assert Graph.parse('{"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]}') == G
    assert Graph.from_text("3\n0 1\nroot 0\n") == Graph(3, [(0, 1)])


def test_incidence_examples():
    assert incidence_matrix(path_graph(2)).rows == ((1, 1),)
    assert incidence_matrix(path_graph(3)).rows == ((1, 1, 0), (0, 1, 1))
    tri = incidence_matrix(complete_graph(3))
    assert all(sum(r) == 2 for r in tri.rows)
    assert sorted(tri.rows) == sorted({(1, 1, 0), (0, 1, 1), (1, 0, 1)})
    with pytest.raises(DomainError):
        incidence_matrix(empty_graph(3))


def test_incidence_column_sums_are_degrees():
    G = Graph(5, [(0, 1), (0, 2), (0, 3), (3, 4)])
    I = incidence_matrix(G)
    assert [sum(I.col(j)) for j in range(5)] == [G.degree(v) for v in range(5)]


def test_formula_examples():
    assert gram_det_formula(path_graph(5)) == 5
    assert gram_det_formula(star_graph(4)) == 5
    assert gram_det_formula(cycle_graph(4)) == 0
    assert gram_det_formula(cycle_graph(5)) == 4
    assert gram_det_formula(complete_graph(4)) == 0
    with pytest.raises(DomainError):
        gram_det_formula(Graph(4, [(0, 1), (2, 3)]))


def test_gram_det_examples():
    assert gram_det(Graph(4, [(0, 1), (2, 3)])) == 4
    k2_k3 = Graph(5, [(0, 1), (2, 3), (3, 4), (2, 4)])
    assert gram_det(k2_k3) == 8 == brute_gram_det(k2_k3)
    assert gram_det(Graph(3, [(1, 2)])) == 2


def test_brute_gram_matches_hand_oracle():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(2, 6)
        es = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.4]
        if not es or len(es) > 6:
            continue
        G = Graph(n, es)
        rows = [list(r) for r in incidence_matrix(G).rows]
        assert brute_gram_det(G) == leibniz_det(gram_by_hand(rows))
        assert gram_det(G) == brute_gram_det(G)


def test_edge_list_paths_agree():
    rng = random.Random(7)
    trees = [random_tree(7, rng) for _ in range(50)]
    lists = [list(T.edges) for T in trees]
    assert edge_lists_gram_dets(lists) == [brute_gram_det(T) for T in trees]
    assert [edge_list_gram_det(7, es) for es in lists] == [7] * 50
    assert edge_list_gram_det(3, [(0, 1), (1, 2), (0, 2)]) == 4


def test_component_profile_product():
    G = Graph(9, [(0, 1), (2, 3), (3, 4), (5, 6), (6, 7), (5, 7)])
    prof = component_profile(G)
    assert (prof.k1, prof.k2, prof.k3, prof.isolated) == (1, 1, 1, 1)
    assert prof.small_only
    assert prof.predicted_gram_det() == 2 * 3 * 4 == gram_det(G)
    assert not component_profile(path_graph(4)).small_only


def test_small_component_identity_exhaustive():
    for G in enumerate_graphs(6):
        if G.m == 0:
            continue
        prof = component_profile(G)
        if prof.small_only:
            assert gram_det(G) == prof.predicted_gram_det()


def test_dense_component_is_singular():
    for G in connected_graphs(5):
        if G.m > G.n:
            assert brute_gram_det(G) == 0


def test_gram_bound_examples():
    assert lemma_gram_bound(6, 3).value == pytest.approx(8)
    assert lemma_gram_bound(6, 6).value == pytest.approx(16)
    assert lemma_gram_bound(3, 3).value == pytest.approx(4)
    with pytest.raises(DomainError):
        lemma_gram_bound(3, 0)


@pytest.mark.parametrize("n,m,want", [(6, 3, 8), (3, 3, 4), (9, 9, 64), (5, 4, 8)])
def test_extremal_examples(n, m, want):
    G = extremal_gram_graph(n, m)
    assert (G.n, G.m) == (n, m)
    assert gram_det(G) == brute_gram_det(G) == want == extremal_gram_value(n, m)


def test_extremal_out_of_regime():
    with pytest.raises(DomainError):
        extremal_gram_graph(4, 3)
    with pytest.raises(DomainError):
        extremal_gram_graph(4, 5)


@pytest.mark.parametrize("n,count", [(2, 1), (3, 3), (4, 16), (5, 125)])
def test_tree_enumeration_counts(n, count):
    trees = list(enumerate_trees(n))
    assert len(trees) == count == tree_count(n)
    assert len({frozenset(T.edges) for T in trees}) == count
    assert all(T.is_tree() for T in trees)


def test_tree_enumeration_matches_edge_subsets():
    # oracle: every (n-1)-edge subset that is connected
    n = 5
    want = set()
    for es in itertools.combinations(itertools.combinations(range(n), 2), n - 1):
        G = Graph(n, es)
        if G.is_connected():
            want.add(frozenset(G.edges))
    assert {frozenset(T.edges) for T in enumerate_trees(n)} == want


def test_tree_enumeration_slices():
    full = list(enumerate_trees(5))
    parts = list(enumerate_trees(5, 0, 60)) + list(enumerate_trees(5, 60))
    assert parts == full


def test_prufer_known_tree():
    # sequence (3, 3, 3) on 5 vertices is the star centred at 3
    T = prufer_decode((3, 3, 3), 5)
    assert set(T.edges) == {(0, 3), (1, 3), (2, 3), (3, 4)}


def test_atlas_matches_networkx_count():
    graphs = list(atlas_graphs(7))
    assert len(graphs) == sum(1 for H in nx.graph_atlas_g() if H.number_of_nodes() >= 1)
    assert sum(1 for G in graphs if G.n == 4) == 11


@settings(max_examples=80)
@given(st.integers(2, 9), st.integers(0, 10**6))
def test_random_tree_gram_is_order(n, seed):
    T = random_tree(n, random.Random(seed))
    assert T.is_tree()
    assert brute_gram_det(T) == n


def test_gram_det_matches_square_det():
    # unicyclic graphs give square incidence matrices: Gram det = det^2
    for G in connected_graphs(5, max_edges=5):
        if G.m == G.n:
            assert brute_gram_det(G) == det_exact(incidence_matrix(G)) ** 2
