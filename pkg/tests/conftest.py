"""Shared fixtures and independent oracles for the test suite.

The oracles here are deliberately naive (dense matrices, pair enumeration,
path enumeration) and never share code with the implementations they check.
"""

from __future__ import annotations

import numpy as np
import pytest

from netsample.graph import Graph


def dense_adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    src, dst, w = g.edge_arrays()
    a[src, dst] = w
    return a


def random_digraph(n, p, rng, weighted=False) -> Graph:
    a = (rng.random((n, n)) < p).astype(float)
    np.fill_diagonal(a, 0)
    if weighted:
        a *= rng.random((n, n)) + 0.5
    src, dst = np.nonzero(a)
    return Graph.from_arrays(n, src, dst, a[src, dst], directed=True)


def random_undirected(n, p, rng, weighted=False) -> Graph:
    a = np.triu((rng.random((n, n)) < p).astype(float), k=1)
    if weighted:
        a *= rng.random((n, n)) + 0.5
    src, dst = np.nonzero(a)
    return Graph.from_arrays(n, src, dst, a[src, dst], directed=False)


# -- dense criterion oracles ------------------------------------------


def dense_tcec_score(a: np.ndarray, members, j: int, alpha: float) -> float:
    """Literal evaluation of the selection criterion from explicit b1/b3/U."""
    n = a.shape[0]
    s_idx = np.fromiter(members, dtype=np.int64)
    o_mask = np.ones(n, dtype=bool)
    o_mask[s_idx] = False
    o_mask[j] = False
    o_idx = np.flatnonzero(o_mask)
    b1 = a[j, s_idx]
    b3 = a[o_idx, j]
    u = a[np.ix_(o_idx, s_idx)]  # rows: outside nodes, columns: members
    btu = u @ b1
    d_in = a[s_idx, j].sum()
    return float((1 - alpha) * (b1 @ b1 + btu @ btu - b3 @ b3) + alpha * d_in)


def pagerank_transition(a: np.ndarray) -> np.ndarray:
    """Row-stochastic walk matrix; dangling rows become uniform."""
    n = a.shape[0]
    p = np.empty((n, n))
    dout = a.sum(axis=1)
    for x in range(n):
        p[x, :] = a[x, :] / dout[x] if dout[x] > 0 else 1.0 / n
    return p


def dense_tcpr_score(a: np.ndarray, members, j: int, gamma: float) -> float:
    """Un-truncated L1 criterion on the dense damped walk matrix."""
    n = a.shape[0]
    t = gamma * pagerank_transition(a) + (1 - gamma) / n
    s_idx = np.fromiter(members, dtype=np.int64)
    o_mask = np.ones(n, dtype=bool)
    o_mask[s_idx] = False
    o_mask[j] = False
    o_idx = np.flatnonzero(o_mask)
    b1 = t[j, s_idx].sum()
    b3 = t[o_idx, j].sum()
    b1u = float(t[j, s_idx] @ t[np.ix_(s_idx, o_idx)].sum(axis=1))
    return float(b1 + b1u - b3)


# -- brute-force measure oracles --------------------------------------


def brute_kendall_tau_b(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    conc = disc = tx = ty = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = np.sign(x[i] - x[j])
            dy = np.sign(y[i] - y[j])
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif dx == dy:
                conc += 1
            else:
                disc += 1
    denom = np.sqrt((conc + disc + tx) * (conc + disc + ty))
    return (conc - disc) / denom


def brute_betweenness(g: Graph) -> np.ndarray:
    """All-pairs shortest-path enumeration (DFS over BFS distance layers)."""
    n = g.n
    adj = [list(map(int, g.out_neighbors(i)[0])) for i in range(n)]
    bc = np.zeros(n)
    for s in range(n):
        # BFS distances
        dist = [-1] * n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if dist[w] < 0:
                        dist[w] = dist[v] + 1
                        nxt.append(w)
            frontier = nxt
        for tgt in range(n):
            if tgt == s or dist[tgt] < 0:
                continue
            # enumerate all shortest s->tgt paths explicitly
            paths = []
            stack = [(s, [s])]
            while stack:
                v, path = stack.pop()
                if v == tgt:
                    paths.append(path)
                    continue
                for w in adj[v]:
                    if dist[w] == len(path) and dist[w] <= dist[tgt]:
                        stack.append((w, path + [w]))
            npaths = len(paths)
            for path in paths:
                for v in path[1:-1]:
                    bc[v] += 1.0 / npaths
    return bc


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
