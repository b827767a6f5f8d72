import numpy as np
import pytest

from netsample.centrality import (
    CentralityVector,
    betweenness,
    eigenvector_centrality,
    in_degree_centrality,
    pagerank,
    springrank,
)
from netsample.errors import ValidationError
from netsample.graph import Graph

from conftest import brute_betweenness, dense_adjacency, random_digraph


def strongly_connected_digraph(n, p, rng):
    """Random digraph plus a ring, so the leading eigenvector is simple."""
    g = random_digraph(n, p, rng)
    src, dst, w = g.edge_arrays()
    ring = np.arange(n)
    src = np.concatenate([src, ring])
    dst = np.concatenate([dst, (ring + 1) % n])
    w = np.concatenate([w, np.ones(n)])
    return Graph(n, src, dst, w, directed=True)


def dense_pagerank(a, gamma):
    """Stationary vector of the damped walk by direct linear solve."""
    n = a.shape[0]
    dout = a.sum(axis=1)
    p = np.empty((n, n))
    for x in range(n):
        p[x, :] = a[x, :] / dout[x] if dout[x] > 0 else 1.0 / n
    t = gamma * p + (1.0 - gamma) / n
    sys = t.T - np.eye(n)
    sys[-1, :] = 1.0  # replace one redundant equation with the simplex constraint
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    return np.linalg.solve(sys, rhs)


def dense_leading_left_eigenvector(a):
    vals, vecs = np.linalg.eig(a.T)
    lead = np.argmax(np.abs(vals))
    v = np.real(vecs[:, lead])
    if v.sum() < 0:
        v = -v
    return v / np.abs(v).sum()


def test_pagerank_matches_dense_solve(rng):
    for _ in range(5):
        g = random_digraph(40, 0.1, rng)
        x = pagerank(g, gamma=0.85).scores
        ref = dense_pagerank(dense_adjacency(g), 0.85)
        assert np.abs(x - ref).sum() < 1e-8
        assert abs(x.sum() - 1.0) < 1e-12


def test_pagerank_two_node_dangling_example():
    g = Graph.from_edges(2, [(0, 1)], directed=True)
    x = pagerank(g, gamma=0.85).scores
    assert x == pytest.approx([0.350877, 0.649123], abs=1e-6)


def test_pagerank_validation():
    g = Graph.from_edges(2, [(0, 1)], directed=True)
    with pytest.raises(ValidationError):
        pagerank(g, gamma=1.0)


def test_eigenvector_matches_dense_eigensolve(rng):
    for _ in range(5):
        g = strongly_connected_digraph(40, 0.1, rng)
        vec = eigenvector_centrality(g, tol=1e-13, max_iter=20000)
        assert vec.converged
        ref = dense_leading_left_eigenvector(dense_adjacency(g))
        assert np.abs(vec.scores - ref).sum() < 1e-8


def test_eigenvector_directed_cycle_is_uniform_exactly():
    n = 6
    g = Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], directed=True)
    vec = eigenvector_centrality(g)
    # exactly uniform: every entry bit-identical (scale fixed by L1 norm)
    assert np.all(vec.scores == vec.scores[0])
    assert vec.scores[0] == pytest.approx(1.0 / n, abs=1e-15)
    assert vec.converged and vec.iterations == 1


def test_eigenvector_edge_cases():
    with pytest.raises(ValidationError):
        eigenvector_centrality(Graph.from_edges(3, [], directed=True))
    # nilpotent adjacency: mass dies, flagged not fatal
    g = Graph.from_edges(3, [(0, 1), (1, 2)], directed=True)
    vec = eigenvector_centrality(g)
    assert not vec.converged


def test_in_degree_centrality(rng):
    g = random_digraph(20, 0.2, rng, weighted=True)
    assert np.array_equal(in_degree_centrality(g).scores, g.in_strength)


def test_betweenness_matches_enumeration_oracle(rng):
    for _ in range(4):
        g = random_digraph(14, 0.18, rng)
        bc = betweenness(g).scores
        assert np.abs(bc - brute_betweenness(g)).max() < 1e-12


def test_betweenness_path_graph():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], directed=True)
    # node 1 is inside paths 0-2, 0-3; node 2 inside 0-3, 1-3
    assert list(betweenness(g).scores) == [0.0, 2.0, 2.0, 0.0]


def test_betweenness_all_sources_equals_default(rng):
    g = random_digraph(15, 0.2, rng)
    assert np.array_equal(
        betweenness(g).scores, betweenness(g, sources=range(15)).scores
    )


def test_springrank_solves_linear_system(rng):
    g = random_digraph(30, 0.15, rng, weighted=True)
    vec = springrank(g, reg=1.0)
    a = dense_adjacency(g)
    dout, din = a.sum(axis=1), a.sum(axis=0)
    op = np.eye(30) + np.diag(dout + din) - (a + a.T)
    assert np.linalg.norm(op @ vec.scores - (dout - din)) < 1e-8


def test_springrank_two_node_case():
    g = Graph.from_edges(2, [(0, 1)], directed=True)
    vec = springrank(g, reg=2.0)
    assert vec.scores == pytest.approx([0.25, -0.25], abs=1e-9)


def test_springrank_symmetric_graph_is_zero(rng):
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], directed=False)
    assert np.abs(springrank(g).scores).max() < 1e-9
    with pytest.raises(ValidationError):
        springrank(g, reg=0.0)


def test_centrality_vector_csv(tmp_path):
    vec = CentralityVector(np.array([0.5, 0.25]), "test")
    path = tmp_path / "scores.csv"
    vec.save_csv(path)
    assert path.read_text().splitlines() == ["node_id,score", "0,0.5", "1,0.25"]
