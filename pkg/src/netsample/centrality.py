"""Node-importance measures: eigenvector, PageRank, in-degree, betweenness,
SpringRank.

Eigenvector centrality and PageRank use the left eigenvector direction
(importance flows along edges: a node's score is fed by its in-edges), so the
two spectral measures agree on orientation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ValidationError
from .graph import Graph


@dataclass
class CentralityVector:
    """Per-node scores of one centrality method plus convergence metadata."""

    scores: np.ndarray
    method: str
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True

    def __post_init__(self):
        self.scores = np.asarray(self.scores, dtype=np.float64)

    def __len__(self):
        return len(self.scores)

    def csv_lines(self):
        yield "node_id,score"
        for i, s in enumerate(self.scores):
            yield f"{i},{float(s)!r}"

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.csv_lines():
                fh.write(line + "\n")


def eigenvector_centrality(g: Graph, tol: float = 1e-10, max_iter: int = 1000) -> CentralityVector:
    """Leading left eigenvector of the adjacency matrix by power iteration.

    Scores are L1-normalized; non-convergence (e.g. on graphs that are not
    strongly connected) is flagged, not fatal.
    """
    if g.num_edges == 0:
        raise ValidationError("eigenvector centrality needs at least one edge")
    a_t = g.to_scipy().T.tocsr()
    n = g.n
    x = np.full(n, 1.0 / n)
    residual = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        y = a_t @ x
        norm = y.sum()
        if norm <= 0:
            # all mass died (nilpotent adjacency); report the flat failure
            return CentralityVector(np.zeros(n), "eigenvector", it, np.inf, converged=False)
        y /= norm
        residual = float(np.abs(y - x).sum())
        x = y
        if residual < tol:
            return CentralityVector(x, "eigenvector", it, residual, converged=True)
    return CentralityVector(x, "eigenvector", it, residual, converged=False)


def pagerank(
    g: Graph, gamma: float = 0.85, tol: float = 1e-12, max_iter: int = 1000
) -> CentralityVector:
    """Damped PageRank fixed point, with dangling columns treated as uniform.

    The dense "Google" matrix is never materialized; iterates stay on the
    simplex and the result sums to 1.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValidationError("damping must lie in [0, 1)")
    n = g.n
    dout = g.out_strength
    dangling = dout <= 0
    inv_dout = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, dout))
    # row-normalize, then transpose: y = P^T x propagates mass along edges
    a = g.to_scipy()
    p_t = sp.csr_matrix(a.multiply(inv_dout[:, None])).T.tocsr()
    x = np.full(n, 1.0 / n)
    residual = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        y = gamma * (p_t @ x + x[dangling].sum() / n) + (1.0 - gamma) / n
        residual = float(np.abs(y - x).sum())
        x = y
        if residual < tol:
            break
    x = x / x.sum()
    return CentralityVector(x, "pagerank", it, residual, converged=residual < tol)


def in_degree_centrality(g: Graph) -> CentralityVector:
    """Weighted in-degree of every node."""
    return CentralityVector(g.in_strength.copy(), "indegree")


def betweenness(g: Graph, sources=None) -> CentralityVector:
    """Brandes betweenness over hop-count shortest paths, endpoints excluded.

    ``sources`` restricts the accumulation to a pivot subset; with all
    sources (the default) the result is exact.
    """
    n = g.n
    if sources is None:
        sources = range(n)
    # plain python adjacency is faster than repeated CSR slicing here
    adj = [list(map(int, g.out_neighbors(i)[0])) for i in range(n)]
    bc = np.zeros(n, dtype=np.float64)
    for s in sources:
        dist = [-1] * n
        sigma = [0.0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1.0
        order: list[int] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v]
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        dep = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + dep[w]) / sigma[w]
            for v in preds[w]:
                dep[v] += sigma[v] * coeff
            if w != s:
                bc[w] += dep[w]
    return CentralityVector(bc, "betweenness")


def springrank(g: Graph, reg: float = 1.0, tol: float = 1e-10, max_iter: int | None = None) -> CentralityVector:
    """Rank scores from directed interactions via a sparse spring system.

    Solves ``[reg*I + D_out + D_in - (A + A^T)] s = d_out - d_in`` with
    conjugate gradient; the operator is symmetric positive definite for
    ``reg > 0``. Scores are not normalized (only ranks matter downstream).
    """
    if reg <= 0:
        raise ValidationError("regularization must be positive")
    n = g.n
    a = g.to_scipy()
    w = a + a.T
    op = reg * sp.identity(n, format="csr") + sp.diags(g.out_strength + g.in_strength) - w
    rhs = g.out_strength - g.in_strength
    if not np.any(rhs):
        return CentralityVector(np.zeros(n), "springrank", 0, 0.0, converged=True)
    s, info = spla.cg(op, rhs, rtol=tol, atol=tol, maxiter=max_iter)
    residual = float(np.linalg.norm(op @ s - rhs))
    return CentralityVector(s, "springrank", 0, residual, converged=info == 0)


MEASURES = {
    "eigenvector": eigenvector_centrality,
    "pagerank": pagerank,
    "indegree": in_degree_centrality,
    "betweenness": betweenness,
    "springrank": springrank,
}
