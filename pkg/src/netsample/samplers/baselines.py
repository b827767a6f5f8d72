"""Baseline samplers: uniform nodes, random walk, expansion, node2vec walk."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .base import (
    RESTART_PROB,
    STEP_BUDGET_FACTOR,
    SampleResult,
    SamplerConfig,
    neighborhood,
    partial_error,
    pick_seed,
)


def sample_random_node(g, cfg: SamplerConfig) -> SampleResult:
    """Uniform sampling on nodes, without replacement."""
    n = g.node_count()
    cfg.validate(n)
    rng = np.random.default_rng(cfg.rng_seed)
    nodes = [int(v) for v in rng.permutation(n)[: cfg.target_size]]
    return SampleResult(
        nodes=nodes,
        tags=["rn"] * len(nodes),
        counters={"steps": len(nodes)},
        config=cfg.echo(sampler="rn"),
    )


def sample_random_walk(g, cfg: SamplerConfig) -> SampleResult:
    """Uniform random walk collecting newly visited nodes.

    On a sink, or with probability 0.15 per step, the walker restarts at a
    uniformly chosen already-sampled node.
    """
    n = g.node_count()
    cfg.validate(n)
    rng = np.random.default_rng(cfg.rng_seed)
    seed = pick_seed(cfg, g, rng)
    m = cfg.target_size
    nodes = [seed]
    visited = np.zeros(n, dtype=bool)
    visited[seed] = True
    budget = STEP_BUDGET_FACTOR * m
    steps = 0
    current = seed
    while len(nodes) < m:
        if steps >= budget:
            raise partial_error(
                f"random walk found {len(nodes)}/{m} nodes within {budget} steps",
                nodes,
                ["rw"] * len(nodes),
                {"steps": steps},
            )
        steps += 1
        out_idx, _ = g.out_neighbors(current)
        if out_idx.size == 0 or rng.random() < RESTART_PROB:
            current = nodes[int(rng.integers(len(nodes)))]
            continue
        current = int(out_idx[int(rng.integers(out_idx.size))])
        if not visited[current]:
            visited[current] = True
            nodes.append(current)
    return SampleResult(
        nodes=nodes,
        tags=["rw"] * len(nodes),
        counters={"steps": steps},
        config=cfg.echo(sampler="rw"),
    )


def sample_expansion(g, cfg: SamplerConfig) -> SampleResult:
    """Greedy expansion sampling.

    At each step the border node maximizing ``|N(v) \\ (S u N(S))|`` joins
    the sample, with N the undirected neighborhood; ties break on the
    smallest node id, so the run is fully deterministic given the seed.
    """
    n = g.node_count()
    cfg.validate(n)
    rng = np.random.default_rng(cfg.rng_seed)
    seed = pick_seed(cfg, g, rng)
    m = cfg.target_size
    nbh_cache: dict[int, np.ndarray] = {}

    def nbh(v):
        arr = nbh_cache.get(v)
        if arr is None:
            arr = neighborhood(g, v)
            nbh_cache[v] = arr
        return arr

    member = np.zeros(n, dtype=bool)
    closure = np.zeros(n, dtype=bool)  # S union N(S)
    border: set[int] = set()
    nodes: list[int] = []

    def admit(v):
        nodes.append(v)
        member[v] = True
        closure[v] = True
        border.discard(v)
        nb = nbh(v)
        closure[nb] = True
        for u in nb[~member[nb]]:
            border.add(int(u))

    admit(seed)
    while len(nodes) < m:
        if not border:
            raise partial_error(
                f"expansion border exhausted at {len(nodes)}/{m} nodes",
                nodes,
                ["xs"] * len(nodes),
                {},
            )
        best, best_gain = None, -1
        for v in sorted(border):
            nb = nbh(v)
            gain = int(np.count_nonzero(~closure[nb]))
            if gain > best_gain:
                best, best_gain = v, gain
        admit(best)
    return SampleResult(
        nodes=nodes,
        tags=["xs"] * len(nodes),
        counters={"border_peak": len(border)},
        config=cfg.echo(sampler="xs"),
    )


def node2vec_step_weights(g, prev: int | None, current: int, p: float, q: float, adj_sets):
    """Unnormalized transition weights for the second-order walk.

    From previous node ``prev`` at ``current``, neighbor x gets
    ``w(current, x) * (1/p if x == prev; 1 if x adjacent to prev; 1/q)``.
    Adjacency is undirected.
    """
    out_idx, out_w = g.out_neighbors(current)
    if prev is None or out_idx.size == 0:
        return out_idx, out_w.astype(np.float64)
    prev_adj = adj_sets(prev)
    bias = np.empty(out_idx.size, dtype=np.float64)
    for pos, x in enumerate(out_idx):
        x = int(x)
        if x == prev:
            bias[pos] = 1.0 / p
        elif x in prev_adj:
            bias[pos] = 1.0
        else:
            bias[pos] = 1.0 / q
    return out_idx, out_w * bias


def sample_node2vec_walk(g, cfg: SamplerConfig, p: float = 2.0, q: float = 0.5) -> SampleResult:
    """Second-order (node2vec-style) walk collecting newly visited nodes.

    Dead-end and restart handling are identical to the uniform random walk;
    a restart forgets the previous node, so the next step is first-order.
    """
    if p <= 0 or q <= 0:
        raise ValidationError("node2vec parameters p, q must be positive")
    n = g.node_count()
    cfg.validate(n)
    rng = np.random.default_rng(cfg.rng_seed)
    seed = pick_seed(cfg, g, rng)
    m = cfg.target_size
    adj_cache: dict[int, set] = {}

    def adj_sets(v):
        s = adj_cache.get(v)
        if s is None:
            s = set(int(u) for u in neighborhood(g, v))
            adj_cache[v] = s
        return s

    nodes = [seed]
    visited = np.zeros(n, dtype=bool)
    visited[seed] = True
    budget = STEP_BUDGET_FACTOR * m
    steps = 0
    prev: int | None = None
    current = seed
    while len(nodes) < m:
        if steps >= budget:
            raise partial_error(
                f"node2vec walk found {len(nodes)}/{m} nodes within {budget} steps",
                nodes,
                ["node2vec"] * len(nodes),
                {"steps": steps},
            )
        steps += 1
        out_idx, _ = g.out_neighbors(current)
        if out_idx.size == 0 or rng.random() < RESTART_PROB:
            prev = None
            current = nodes[int(rng.integers(len(nodes)))]
            continue
        idx, weights = node2vec_step_weights(g, prev, current, p, q, adj_sets)
        total = float(weights.sum())
        if total <= 0:
            prev = None
            current = nodes[int(rng.integers(len(nodes)))]
            continue
        u = rng.random() * total
        pos = min(int(np.searchsorted(np.cumsum(weights), u, side="right")), idx.size - 1)
        choice = int(idx[pos])
        prev = current
        current = choice
        if not visited[current]:
            visited[current] = True
            nodes.append(current)
    return SampleResult(
        nodes=nodes,
        tags=["node2vec"] * len(nodes),
        counters={"steps": steps},
        config=cfg.echo(sampler="node2vec", node2vec_p=p, node2vec_q=q),
    )
