"""Synthetic networks: stochastic block models and planted node attributes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .graph import Graph, LabeledPartition


@dataclass(frozen=True)
class SbmSpec:
    """Stochastic block model parameters.

    Every potential edge (i, j), i != j, exists independently with
    probability ``p_in`` when i and j share a block and ``p_out`` otherwise.
    """

    block_sizes: tuple[int, ...]
    p_in: float
    p_out: float
    directed: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(b) for b in self.block_sizes))
        if not self.block_sizes or any(b <= 0 for b in self.block_sizes):
            raise ValidationError("block sizes must be positive")
        for p in (self.p_in, self.p_out):
            if not 0.0 <= p <= 1.0:
                raise ValidationError("edge probabilities must lie in [0, 1]")

    @property
    def n(self) -> int:
        return sum(self.block_sizes)


def _bernoulli_positions(count: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of successes among ``count`` independent Bernoulli(p) trials.

    Uses geometric skips between successes, so the cost is O(successes)
    rather than O(count).
    """
    if count <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(count, dtype=np.int64)
    chunks = []
    total = -1  # last emitted position
    est = int(count * p + 10.0 * np.sqrt(count * p) + 10.0)
    while True:
        gaps = rng.geometric(p, size=est)
        pos = total + np.cumsum(gaps)
        chunks.append(pos)
        total = int(pos[-1])
        if total >= count - 1:
            break
        est = max(16, int((count - 1 - total) * p) + 16)
    pos = np.concatenate(chunks)
    return pos[pos < count]


def _triangle_unrank(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map flat indices over the strict upper triangle of an n x n grid to (i, j), i < j."""
    # row i starts at offset i*n - i*(i+1)/2 - i  ==  C(i) with rows of length n-1-i
    kk = k.astype(np.float64)
    i = np.floor(((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8.0 * kk)) / 2.0).astype(np.int64)
    # guard against float rounding at row boundaries
    for _ in range(2):
        start = i * (2 * n - i - 1) // 2
        i = np.where(start > k, i - 1, i)
        end = (i + 1) * (2 * n - i - 2) // 2
        i = np.where(k >= end, i + 1, i)
    start = i * (2 * n - i - 1) // 2
    j = k - start + i + 1
    return i, j


def _rect_unrank(k: np.ndarray, ncols: int) -> tuple[np.ndarray, np.ndarray]:
    return k // ncols, k % ncols


def _offdiag_unrank(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map flat indices over ordered non-diagonal pairs of 0..n-1 to (i, j)."""
    i = k // (n - 1)
    j = k % (n - 1)
    j = j + (j >= i)
    return i, j


def generate_sbm(spec: SbmSpec) -> tuple[Graph, LabeledPartition]:
    """Draw a graph from the SBM, with the block partition.

    Deterministic given ``spec.rng_seed``. Undirected graphs draw each pair
    once and mirror the edge; directed graphs draw the two directions
    independently.
    """
    n = spec.n
    if n == 0:
        raise ValidationError("SBM with zero nodes")
    rng = np.random.default_rng(spec.rng_seed)
    offsets = np.concatenate([[0], np.cumsum(spec.block_sizes)])
    src_parts, dst_parts = [], []
    nblocks = len(spec.block_sizes)
    for a in range(nblocks):
        na = spec.block_sizes[a]
        # within-block edges
        if spec.directed:
            pos = _bernoulli_positions(na * (na - 1), spec.p_in, rng)
            i, j = _offdiag_unrank(pos, na)
            src_parts.append(i + offsets[a])
            dst_parts.append(j + offsets[a])
        else:
            pos = _bernoulli_positions(na * (na - 1) // 2, spec.p_in, rng)
            i, j = _triangle_unrank(pos, na)
            src_parts.append(i + offsets[a])
            dst_parts.append(j + offsets[a])
        # cross-block edges
        for b in range(nblocks):
            if b == a or (not spec.directed and b < a):
                continue
            nb = spec.block_sizes[b]
            pos = _bernoulli_positions(na * nb, spec.p_out, rng)
            i, j = _rect_unrank(pos, nb)
            src_parts.append(i + offsets[a])
            dst_parts.append(j + offsets[b])
    src = np.concatenate(src_parts) if src_parts else np.empty(0, dtype=np.int64)
    dst = np.concatenate(dst_parts) if dst_parts else np.empty(0, dtype=np.int64)
    g = Graph.from_arrays(n, src, dst, np.ones(src.size), directed=spec.directed)
    blocks = np.repeat(np.arange(nblocks), spec.block_sizes)
    partition = LabeledPartition({i: int(b) for i, b in enumerate(blocks)})
    return g, partition


def plant_attributes(
    partition: LabeledPartition,
    noise: float,
    labels: list,
    rng_seed: int = 0,
) -> LabeledPartition:
    """Attach a categorical attribute aligned with the blocks, plus noise.

    Each node keeps its block-aligned label with probability ``1 - noise``
    and otherwise gets a uniformly random *other* label from ``labels``.
    """
    if not 0.0 <= noise <= 1.0:
        raise ValidationError("noise must lie in [0, 1]")
    blocks = partition.categories
    if len(labels) < len(blocks):
        raise ValidationError(f"need at least {len(blocks)} labels, got {len(labels)}")
    if len(labels) < 2 and noise > 0:
        raise ValidationError("noise requires at least two labels")
    aligned = {blk: labels[i] for i, blk in enumerate(blocks)}
    rng = np.random.default_rng(rng_seed)
    out: dict[int, object] = {}
    for node in sorted(partition.assignments):
        base = aligned[partition.assignments[node]]
        if rng.random() < noise:
            others = [lab for lab in labels if lab != base]
            out[node] = others[rng.integers(len(others))]
        else:
            out[node] = base
    return LabeledPartition(out)
