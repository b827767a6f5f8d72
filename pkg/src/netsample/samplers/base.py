"""Shared sampler machinery: config, crawl state, leaderboard, results."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import PartialSampleError, ValidationError

# the walker jumps back into the sample this often; the protocol never
# specifies sink handling, so the constant is recorded in every result
RESTART_PROB = 0.15
STEP_BUDGET_FACTOR = 1000


@dataclass
class SamplerConfig:
    """Knobs shared by all samplers; criterion samplers read most of them.

    ``alpha=None`` resolves at run time to 0 for undirected graphs and 0.5
    for directed ones.
    """

    target_size: int
    rw_init_fraction: float = 0.2
    leaderboard_capacity: int = 100
    alpha: float | None = None
    exploration_p: float = 0.1
    damping: float = 0.85
    seed_nodes: tuple[int, ...] = ()
    rng_seed: int = 0
    rescore_on_pop: bool = False

    def __post_init__(self):
        self.seed_nodes = tuple(int(s) for s in self.seed_nodes)

    def validate(self, n: int) -> None:
        if not 1 <= self.target_size <= n:
            raise ValidationError(f"target size {self.target_size} not in 1..{n}")
        if self.leaderboard_capacity < 1:
            raise ValidationError("leaderboard capacity must be >= 1")
        if not 0.0 < self.rw_init_fraction <= 1.0:
            raise ValidationError("rw_init_fraction must lie in (0, 1]")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ValidationError("alpha must lie in [0, 1]")
        if not 0.0 <= self.exploration_p <= 1.0:
            raise ValidationError("exploration_p must lie in [0, 1]")
        if not 0.0 <= self.damping < 1.0:
            raise ValidationError("damping must lie in [0, 1)")

    def resolved_alpha(self, directed: bool) -> float:
        if self.alpha is not None:
            return float(self.alpha)
        return 0.5 if directed else 0.0

    def echo(self, **extra) -> dict:
        d = asdict(self)
        d["seed_nodes"] = list(self.seed_nodes)
        d["restart_prob"] = RESTART_PROB
        d["step_budget_factor"] = STEP_BUDGET_FACTOR
        d.update(extra)
        return d


@dataclass
class SampleResult:
    """Ordered sampled nodes plus provenance and counters."""

    nodes: list[int]
    tags: list[str]
    counters: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.nodes) != len(set(self.nodes)):
            raise ValidationError("sampled nodes must be distinct")
        if len(self.tags) != len(self.nodes):
            raise ValidationError("one provenance tag per node required")

    def to_json(self) -> str:
        return json.dumps(
            {
                "nodes": [int(v) for v in self.nodes],
                "tags": self.tags,
                "counters": self.counters,
                "config": self.config,
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "SampleResult":
        d = json.loads(text)
        return cls(nodes=d["nodes"], tags=d["tags"], counters=d["counters"], config=d["config"])

    def save(self, json_path, nodes_path=None) -> None:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")
        if nodes_path is not None:
            with open(nodes_path, "w", encoding="utf-8") as fh:
                for v in self.nodes:
                    fh.write(f"{int(v)}\n")


class Leaderboard:
    """Bounded best-score buffer of border candidates.

    Pop returns the highest score; ties go to the earliest insertion. When
    full, the lowest score is evicted (ties: the latest insertion goes).
    Scores are computed at insertion time and not refreshed unless the owner
    rescans entries (``rescore_on_pop`` mode).
    """

    def __init__(self, capacity: int):
        self.capacity = int(capacity)
        self._entries: dict[int, list] = {}  # node -> [score, insertion_step, epoch]
        self._steps = 0
        self.evictions = 0

    def __len__(self):
        return len(self._entries)

    def __contains__(self, node):
        return node in self._entries

    def nodes(self) -> list[int]:
        return list(self._entries)

    def entries(self) -> list[tuple[int, float, int]]:
        return [(node, e[0], e[1]) for node, e in self._entries.items()]

    def offer(self, node: int, score: float, epoch: int = 0) -> None:
        ent = self._entries.get(node)
        if ent is not None:
            # fresher score, original insertion order
            ent[0] = score
            ent[2] = epoch
            return
        self._steps += 1
        self._entries[node] = [score, self._steps, epoch]
        if len(self._entries) > self.capacity:
            worst = min(self._entries, key=lambda v: (self._entries[v][0], -self._entries[v][1]))
            del self._entries[worst]
            self.evictions += 1

    def set_score(self, node: int, score: float, epoch: int) -> None:
        ent = self._entries[node]
        ent[0] = score
        ent[2] = epoch

    def stale_nodes(self, epoch: int) -> list[int]:
        return [node for node, e in self._entries.items() if e[2] != epoch]

    def pop_best(self) -> int | None:
        if not self._entries:
            return None
        best = max(self._entries, key=lambda v: (self._entries[v][0], -self._entries[v][1]))
        del self._entries[best]
        return int(best)

    def discard(self, node: int) -> None:
        self._entries.pop(node, None)


@dataclass
class SampleState:
    """Evolving crawl state shared by the criterion samplers."""

    n: int
    members: list[int] = field(default_factory=list)
    member_mask: np.ndarray = None
    in_sample_indegree: np.ndarray = None
    leaderboard: Leaderboard = None
    delta: np.ndarray = None  # TCPR only
    dangling_members: list[int] = field(default_factory=list)

    @classmethod
    def empty(cls, n: int, capacity: int, with_delta: bool = False) -> "SampleState":
        return cls(
            n=n,
            member_mask=np.zeros(n, dtype=bool),
            in_sample_indegree=np.zeros(n, dtype=np.float64),
            leaderboard=Leaderboard(capacity),
            delta=np.zeros(n, dtype=np.float64) if with_delta else None,
        )

    @property
    def k(self) -> int:
        return len(self.members)


def neighborhood(g, node: int) -> np.ndarray:
    """Distinct in- and out-neighbors of ``node``, excluding ``node`` itself."""
    out_idx, _ = g.out_neighbors(node)
    in_idx, _ = g.in_neighbors(node)
    nb = np.union1d(out_idx, in_idx)
    return nb[nb != node]


def walk_until_new(g, rng, current, sampled, member_mask, budget):
    """Advance a uniform random walk until it reaches an unsampled node.

    Restarts at a uniformly chosen already-sampled node on sinks or with
    probability ``RESTART_PROB`` per step. Returns ``(node, steps_used)`` or
    ``(None, steps_used)`` when the budget runs out.
    """
    steps = 0
    while steps < budget:
        steps += 1
        out_idx, _ = g.out_neighbors(current)
        if out_idx.size == 0 or rng.random() < RESTART_PROB:
            current = sampled[int(rng.integers(len(sampled)))]
            continue
        current = int(out_idx[int(rng.integers(out_idx.size))])
        if not member_mask[current]:
            return current, steps
    return None, steps


def pick_seed(cfg: SamplerConfig, g, rng) -> int:
    if cfg.seed_nodes:
        seed = cfg.seed_nodes[0]
        if not 0 <= seed < g.node_count():
            raise ValidationError(f"seed node {seed} out of range")
        return int(seed)
    return int(rng.integers(g.node_count()))


def partial_error(message, nodes, tags, counters) -> PartialSampleError:
    return PartialSampleError(message, nodes=nodes, tags=tags, counters=counters)
