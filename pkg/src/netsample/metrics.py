"""Rank-correlation and distribution-discrepancy measures.

All logarithms are natural (nats).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEntropyWarning, UndefinedCorrelationError, ValidationError
from .graph import UNKNOWN_LABEL, LabeledPartition

KL_EPSILON = 1e-12


@dataclass(frozen=True)
class CategoricalDistribution:
    """Probabilities over a fixed, ordered label list."""

    labels: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != probs.size:
            raise ValidationError("labels and probabilities differ in length")
        if np.any(probs < 0):
            raise ValidationError("negative probability")
        if probs.size and abs(probs.sum() - 1.0) > 1e-12:
            raise ValidationError(f"probabilities sum to {probs.sum()}, not 1")

    @classmethod
    def from_counts(cls, labels, counts) -> "CategoricalDistribution":
        counts = np.asarray(counts, dtype=np.float64)
        total = counts.sum()
        if total <= 0:
            raise ValidationError("empty distribution")
        return cls(tuple(labels), counts / total)

    def prob_of(self, label) -> float:
        return float(self.probs[self.labels.index(label)])


def _merge_count_inversions(y: np.ndarray) -> int:
    """Strict inversions (y[i] > y[j] for i < j) by merge sort."""
    arr = list(y)
    buf = [0.0] * len(arr)
    inv = 0

    def sort(lo, hi):
        nonlocal inv
        if hi - lo <= 1:
            return
        mid = (lo + hi) // 2
        sort(lo, mid)
        sort(mid, hi)
        i, j, k = lo, mid, lo
        while i < mid and j < hi:
            if arr[j] < arr[i]:  # strict: equal keys are not inversions
                inv += mid - i
                buf[k] = arr[j]
                j += 1
            else:
                buf[k] = arr[i]
                i += 1
            k += 1
        buf[k : k + (mid - i)] = arr[i:mid]
        k += mid - i
        buf[k : k + (hi - j)] = arr[j:hi]
        arr[lo:hi] = buf[lo:hi]

    sort(0, len(arr))
    return inv


def _tie_pairs(sorted_vals: np.ndarray) -> int:
    total = 0
    run = 1
    for a, b in zip(sorted_vals[:-1], sorted_vals[1:]):
        if a == b:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    total += run * (run - 1) // 2
    return total


def kendall_tau(x, y) -> float:
    """Tie-corrected Kendall tau-b in O(n log n) (Knight's algorithm)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 2:
        raise ValidationError("inputs must be equal-length vectors of size >= 2")
    n = x.size
    perm = np.lexsort((y, x))
    xs, ys = x[perm], y[perm]
    n0 = n * (n - 1) // 2
    n1 = _tie_pairs(xs)
    n2 = _tie_pairs(np.sort(y))
    # pairs tied in both coordinates
    joint = np.lexsort((ys, xs))
    pair_sorted = list(zip(xs[joint], ys[joint]))
    n3 = 0
    run = 1
    for a, b in zip(pair_sorted[:-1], pair_sorted[1:]):
        if a == b:
            run += 1
        else:
            n3 += run * (run - 1) // 2
            run = 1
    n3 += run * (run - 1) // 2
    if n1 == n0 or n2 == n0:
        raise UndefinedCorrelationError("constant input vector")
    discordant = _merge_count_inversions(ys)
    num = n0 - n1 - n2 + n3 - 2 * discordant
    return num / math.sqrt((n0 - n1) * (n0 - n2))


def kl_divergence(
    p: CategoricalDistribution, q: CategoricalDistribution, eps: float = KL_EPSILON
) -> float:
    """KL(p || q) in nats, with every q bin smoothed by ``eps`` and renormalized.

    Sample distributions can miss categories entirely, so the smoothing keeps
    the divergence finite; the value is still >= 0 and 0 iff p == q
    (pre-smoothing differences aside).
    """
    if set(p.labels) != set(q.labels):
        raise ValidationError("distributions are over different label sets")
    q_aligned = np.array([q.prob_of(lab) for lab in p.labels])
    q_smooth = q_aligned + eps
    q_smooth /= q_smooth.sum()
    mask = p.probs > 0
    return float(np.sum(p.probs[mask] * np.log(p.probs[mask] / q_smooth[mask])))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def entropy_ratio(sample_labels, full_labels, seed_region) -> float:
    """Binary-entropy ratio of the seed-region indicator, sample vs full graph.

    Values above 1 flag over-representation of the seed region in the
    sample, below 1 under-representation. A sample frequency of exactly 0 or
    1 makes the ratio degenerate; 0 is returned with a warning.
    """
    sample_labels = list(sample_labels)
    full_labels = list(full_labels)
    if not sample_labels or not full_labels:
        raise ValidationError("empty label multiset")
    p_full = sum(1 for lab in full_labels if lab == seed_region) / len(full_labels)
    if not 0.0 < p_full < 1.0:
        raise ValidationError(
            f"seed region {seed_region!r} has degenerate full-graph frequency {p_full}"
        )
    p_sample = sum(1 for lab in sample_labels if lab == seed_region) / len(sample_labels)
    if p_sample <= 0.0 or p_sample >= 1.0:
        warnings.warn(
            f"seed region frequency {p_sample} in sample; entropy ratio degenerate",
            DegenerateEntropyWarning,
        )
        return 0.0
    return binary_entropy(p_sample) / binary_entropy(p_full)


def label_histogram(nodes, partition: LabeledPartition) -> CategoricalDistribution:
    """Empirical label frequencies over the partition's label set.

    Zero-count labels are retained; the reserved unknown label appears only
    when some queried node is missing from the partition.
    """
    nodes = list(nodes)
    if not nodes:
        raise ValidationError("empty node set")
    labels = partition.labels_for(nodes)
    cats = list(partition.categories)
    if any(lab == UNKNOWN_LABEL for lab in labels) and UNKNOWN_LABEL not in cats:
        cats.append(UNKNOWN_LABEL)
    counts = {c: 0 for c in cats}
    for lab in labels:
        counts[lab] += 1
    return CategoricalDistribution.from_counts(cats, [counts[c] for c in cats])
