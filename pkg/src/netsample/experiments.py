"""Declarative experiment runner reproducing the three study protocols.

An experiment spec (YAML) names an input graph (edge list or SBM), a list of
samplers with their configurations, sample fractions, measures, and a
repetition count. Results are written as long-format CSV
(``dataset,sampler,fraction,measure,mean,std,R`` after aggregation) plus a
JSON sidecar with the fully resolved configuration, so identical specs
reproduce byte-identical outputs.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .centrality import MEASURES, CentralityVector, betweenness
from .errors import PartialSampleError, UndefinedCorrelationError, ValidationError
from .graph import Graph, LabeledPartition, induced_subgraph, load_edge_list, load_labels
from .metrics import entropy_ratio, kendall_tau, kl_divergence, label_histogram
from .samplers import SAMPLERS, SamplerConfig
from .synth import SbmSpec, generate_sbm, plant_attributes

CACHE_ENV_VAR = "NETSAMPLE_CACHE_DIR"
DEFAULT_FRACTIONS = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3)
RAW_HEADER = ["dataset", "sampler", "fraction", "measure", "repetition", "rng_seed", "value"]
SUMMARY_HEADER = ["dataset", "sampler", "fraction", "measure", "mean", "std", "R"]
EXACT_BETWEENNESS_LIMIT = 10_000


@dataclass
class ExperimentSpec:
    """Declarative experiment configuration."""

    kind: str
    input: dict
    samplers: list
    dataset: str = "dataset"
    fractions: tuple = DEFAULT_FRACTIONS
    measures: tuple = ("eigenvector", "pagerank", "indegree")
    repetitions: int = 10
    base_seed: int = 0
    seeds: tuple | None = None
    seed_policy: str = "uniform"  # or "smallest_block"
    seed_regions: tuple = ()
    betweenness_pivots: int = 200
    output_dir: str = "results"

    KINDS = ("centrality_comparison", "community", "attribute")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValidationError(f"unknown experiment kind {self.kind!r}")
        self.fractions = tuple(float(f) for f in self.fractions)
        if any(not 0.0 < f <= 1.0 for f in self.fractions):
            raise ValidationError("fractions must lie in (0, 1]")
        if self.repetitions < 1:
            raise ValidationError("repetitions must be >= 1")
        if self.seeds is not None:
            self.seeds = tuple(int(s) for s in self.seeds)
            if len(self.seeds) < self.repetitions:
                raise ValidationError("fixed seed list shorter than repetitions")
        self.samplers = [
            {"name": s["name"], "config": dict(s.get("config", {}))} for s in self.samplers
        ]
        for s in self.samplers:
            if s["name"] not in SAMPLERS:
                raise ValidationError(f"unknown sampler {s['name']!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown spec keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_yaml(cls, path) -> "ExperimentSpec":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(yaml.safe_load(fh))

    def resolved(self) -> dict:
        """All defaults materialized, for the provenance echo."""
        return {
            "kind": self.kind,
            "dataset": self.dataset,
            "input": self.input,
            "samplers": self.samplers,
            "fractions": list(self.fractions),
            "measures": list(self.measures),
            "repetitions": self.repetitions,
            "base_seed": self.base_seed,
            "seeds": list(self.seeds) if self.seeds is not None else None,
            "seed_policy": self.seed_policy,
            "seed_regions": list(self.seed_regions),
            "betweenness_pivots": self.betweenness_pivots,
            "output_dir": str(self.output_dir),
        }


def load_input(spec: ExperimentSpec) -> tuple[Graph, LabeledPartition | None]:
    """Materialize the graph and (optional) node labels named by the spec."""
    inp = spec.input
    if "edge_list" in inp:
        g, _ = load_edge_list(inp["edge_list"], directed=bool(inp.get("directed", True)))
        partition = load_labels(inp["labels"]) if "labels" in inp else None
    elif "sbm" in inp:
        sbm = SbmSpec(**inp["sbm"])
        g, partition = generate_sbm(sbm)
        if "attributes" in inp:
            attrs = inp["attributes"]
            partition = plant_attributes(
                partition,
                noise=float(attrs.get("noise", 0.0)),
                labels=list(attrs["labels"]),
                rng_seed=int(attrs.get("rng_seed", sbm.rng_seed + 1)),
            )
    else:
        raise ValidationError("input must name an edge_list or an sbm")
    return g, partition


def _rep_seeds(spec: ExperimentSpec, cell: tuple, rep: int) -> tuple[int, int]:
    """Derive (sampler rng seed, seed-node rng seed) for one repetition."""
    if spec.seeds is not None:
        entropy = (spec.seeds[rep],) + cell
    else:
        entropy = (spec.base_seed, rep) + cell
    state = np.random.SeedSequence(entropy).generate_state(2)
    return int(state[0]), int(state[1])


def _pick_seed_node(
    spec: ExperimentSpec,
    g: Graph,
    partition: LabeledPartition | None,
    rng: np.random.Generator,
    region=None,
) -> int:
    if region is not None:
        pool = [v for v, lab in partition.assignments.items() if lab == region]
        if not pool:
            raise ValidationError(f"seed region {region!r} absent from labels")
        return int(sorted(pool)[int(rng.integers(len(pool)))])
    if spec.seed_policy == "smallest_block":
        if partition is None:
            raise ValidationError("smallest_block seed policy needs labels")
        sizes: dict = {}
        for lab in partition.assignments.values():
            sizes[lab] = sizes.get(lab, 0) + 1
        smallest = min(sorted(sizes, key=str), key=lambda lab: sizes[lab])
        pool = sorted(v for v, lab in partition.assignments.items() if lab == smallest)
        return int(pool[int(rng.integers(len(pool)))])
    return int(rng.integers(g.n))


def _build_config(entry: dict, m: int, rng_seed: int, seed_node: int) -> tuple[SamplerConfig, dict]:
    raw = dict(entry["config"])
    extras = {}
    for key in ("node2vec_p", "node2vec_q"):
        if key in raw:
            extras[key] = float(raw.pop(key))
    cfg = SamplerConfig(
        target_size=m, rng_seed=rng_seed, seed_nodes=(seed_node,), **raw
    )
    return cfg, extras


def run_sampler(name: str, g: Graph, cfg: SamplerConfig, extras: dict):
    fn = SAMPLERS[name]
    if name == "node2vec":
        return fn(
            g, cfg, p=extras.get("node2vec_p", 2.0), q=extras.get("node2vec_q", 0.5)
        )
    return fn(g, cfg)


# -- ground-truth centrality cache ------------------------------------


def _graph_digest(g: Graph) -> str:
    src, dst, w = g.edge_arrays()
    h = hashlib.sha256()
    h.update(np.int64(g.n).tobytes())
    h.update(b"directed" if g.directed else b"undirected")
    h.update(src.tobytes())
    h.update(dst.tobytes())
    h.update(w.tobytes())
    return h.hexdigest()


def cache_dir(default_root) -> Path:
    root = os.environ.get(CACHE_ENV_VAR)
    path = Path(root) if root else Path(default_root) / ".cache"
    path.mkdir(parents=True, exist_ok=True)
    return path


def full_centrality(
    g: Graph, measure: str, spec: ExperimentSpec, cache_root=None
) -> CentralityVector:
    """Whole-graph scores, computed once per (graph, measure) and cached."""
    if measure not in MEASURES:
        raise ValidationError(f"unknown measure {measure!r}")
    params: dict = {}
    if measure == "betweenness" and g.n > EXACT_BETWEENNESS_LIMIT:
        params["pivots"] = spec.betweenness_pivots
    key = None
    if cache_root is not None:
        tag = hashlib.sha256(
            (_graph_digest(g) + measure + json.dumps(params, sort_keys=True)).encode()
        ).hexdigest()
        key = cache_dir(cache_root) / f"{measure}-{tag[:24]}.npy"
        if key.exists():
            return CentralityVector(np.load(key), measure)
    if measure == "betweenness" and "pivots" in params:
        pivot_rng = np.random.default_rng(spec.base_seed)
        sources = sorted(
            int(v) for v in pivot_rng.choice(g.n, size=min(params["pivots"], g.n), replace=False)
        )
        vec = betweenness(g, sources=sources)
    else:
        vec = MEASURES[measure](g)
    if key is not None:
        np.save(key, vec.scores)
    return vec


# -- runners ----------------------------------------------------------


@dataclass
class RunResult:
    """Per-repetition metric rows plus their aggregates."""

    rows: list = field(default_factory=list)
    resolved_config: dict = field(default_factory=dict)

    def add(self, dataset, sampler, fraction, measure, repetition, rng_seed, value):
        self.rows.append(
            {
                "dataset": dataset,
                "sampler": sampler,
                "fraction": fraction,
                "measure": measure,
                "repetition": repetition,
                "rng_seed": rng_seed,
                "value": value,
            }
        )

    def summary_rows(self) -> list:
        return aggregate_rows(self.rows)

    def values(self, sampler=None, measure=None, fraction=None) -> list:
        out = []
        for r in self.rows:
            if sampler is not None and r["sampler"] != sampler:
                continue
            if measure is not None and r["measure"] != measure:
                continue
            if fraction is not None and r["fraction"] != fraction:
                continue
            out.append(r["value"])
        return out

    def mean(self, **kw) -> float:
        vals = [v for v in self.values(**kw) if v is not None]
        return float(np.mean(vals)) if vals else math.nan

    def save(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_raw_csv(out / "raw.csv", self.rows)
        write_summary_csv(out / "summary.csv", self.summary_rows())
        with open(out / "resolved_config.json", "w", encoding="utf-8") as fh:
            json.dump(self.resolved_config, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def write_raw_csv(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RAW_HEADER)
        for r in rows:
            writer.writerow([_fmt(r[c]) for c in RAW_HEADER])


def write_summary_csv(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for r in rows:
            writer.writerow([_fmt(r[c]) for c in SUMMARY_HEADER])


def aggregate_rows(rows) -> list:
    """Mean/std per (dataset, sampler, fraction, measure) cell."""
    cells: dict = {}
    for r in rows:
        key = (r["dataset"], r["sampler"], r["fraction"], r["measure"])
        cells.setdefault(key, []).append(r["value"])
    out = []
    for key in sorted(cells, key=lambda k: tuple(str(x) for x in k)):
        vals = [v for v in cells[key] if v is not None]
        dataset, sampler, fraction, measure = key
        out.append(
            {
                "dataset": dataset,
                "sampler": sampler,
                "fraction": fraction,
                "measure": measure,
                "mean": float(np.mean(vals)) if vals else None,
                "std": float(np.std(vals)) if vals else None,
                "R": len(vals),
            }
        )
    return out


def _sample_size(fraction: float, n: int) -> int:
    return max(1, min(n, round(fraction * n)))


def run_centrality_comparison(spec: ExperimentSpec) -> RunResult:
    """In-sample vs whole-graph rank correlation per (sampler, fraction, rep).

    For each cell the sampler runs, the sample induces a subgraph, every
    measure is computed on both the subgraph and the full graph, and the
    Kendall tau-b over sampled nodes is recorded. Partial samples become
    missing cells, not failures.
    """
    g, partition = load_input(spec)
    result = RunResult(resolved_config=spec.resolved())
    full = {m: full_centrality(g, m, spec, cache_root=spec.output_dir) for m in spec.measures}
    for si, entry in enumerate(spec.samplers):
        for fi, fraction in enumerate(spec.fractions):
            m = _sample_size(fraction, g.n)
            for rep in range(spec.repetitions):
                s_seed, n_seed = _rep_seeds(spec, (si, fi), rep)
                node_rng = np.random.default_rng(n_seed)
                seed_node = _pick_seed_node(spec, g, partition, node_rng)
                cfg, extras = _build_config(entry, m, s_seed, seed_node)
                try:
                    sample = run_sampler(entry["name"], g, cfg, extras)
                except PartialSampleError:
                    for meas in spec.measures:
                        result.add(
                            spec.dataset, entry["name"], fraction, meas, rep, s_seed, None
                        )
                    continue
                sub, mapping = induced_subgraph(g, sample.nodes)
                for meas in spec.measures:
                    try:
                        sub_scores = MEASURES[meas](sub)
                        whole = full[meas].scores[mapping.sub_to_full]
                        tau = kendall_tau(sub_scores.scores, whole)
                    except (UndefinedCorrelationError, ValidationError):
                        tau = None
                    result.add(
                        spec.dataset, entry["name"], fraction, meas, rep, s_seed, tau
                    )
    return result


def run_community_experiment(spec: ExperimentSpec) -> RunResult:
    """Community representation in samples of a labeled (usually SBM) graph.

    Records KL(p_G || p_Gm) between the whole-graph and in-sample block
    distributions and the fraction of the sample inside the seed node's
    block. Seed policy "smallest_block" starts every sampler in the smallest
    community.
    """
    g, partition = load_input(spec)
    if partition is None:
        raise ValidationError("community experiment needs a labeled input")
    full_hist = label_histogram(range(g.n), partition)
    result = RunResult(resolved_config=spec.resolved())
    for si, entry in enumerate(spec.samplers):
        for fi, fraction in enumerate(spec.fractions):
            m = _sample_size(fraction, g.n)
            for rep in range(spec.repetitions):
                s_seed, n_seed = _rep_seeds(spec, (si, fi), rep)
                node_rng = np.random.default_rng(n_seed)
                seed_node = _pick_seed_node(spec, g, partition, node_rng)
                seed_block = partition.label_of(seed_node)
                cfg, extras = _build_config(entry, m, s_seed, seed_node)
                try:
                    sample = run_sampler(entry["name"], g, cfg, extras)
                except PartialSampleError:
                    for meas in ("kl", "seed_block_fraction"):
                        result.add(
                            spec.dataset, entry["name"], fraction, meas, rep, s_seed, None
                        )
                    continue
                hist = label_histogram(sample.nodes, partition)
                kl = kl_divergence(full_hist, hist)
                in_seed = sum(
                    1 for v in sample.nodes if partition.label_of(v) == seed_block
                ) / len(sample.nodes)
                result.add(spec.dataset, entry["name"], fraction, "kl", rep, s_seed, kl)
                result.add(
                    spec.dataset,
                    entry["name"],
                    fraction,
                    "seed_block_fraction",
                    rep,
                    s_seed,
                    in_seed,
                )
    return result


def run_attribute_experiment(spec: ExperimentSpec) -> RunResult:
    """Node-attribute preservation per (seed region, sampler, repetition).

    Samplers start from a node of each configured seed region; the in-sample
    attribute histogram yields KL(p_G || p_Gm) and the entropy ratio of the
    seed region. Region names are folded into the measure column
    (``kl:REGION``, ``entropy_ratio:REGION``) so the report schema stays flat.
    """
    g, partition = load_input(spec)
    if partition is None:
        raise ValidationError("attribute experiment needs labeled input")
    if not spec.seed_regions:
        raise ValidationError("attribute experiment needs seed_regions")
    present = set(partition.assignments.values())
    for region in spec.seed_regions:
        if region not in present:
            raise ValidationError(f"seed region {region!r} absent from labels")
    full_hist = label_histogram(range(g.n), partition)
    full_labels = partition.labels_for(range(g.n))
    result = RunResult(resolved_config=spec.resolved())
    for ri, region in enumerate(spec.seed_regions):
        for si, entry in enumerate(spec.samplers):
            for fi, fraction in enumerate(spec.fractions):
                m = _sample_size(fraction, g.n)
                for rep in range(spec.repetitions):
                    s_seed, n_seed = _rep_seeds(spec, (ri, si, fi), rep)
                    node_rng = np.random.default_rng(n_seed)
                    seed_node = _pick_seed_node(spec, g, partition, node_rng, region=region)
                    cfg, extras = _build_config(entry, m, s_seed, seed_node)
                    try:
                        sample = run_sampler(entry["name"], g, cfg, extras)
                    except PartialSampleError:
                        for meas in (f"kl:{region}", f"entropy_ratio:{region}"):
                            result.add(
                                spec.dataset, entry["name"], fraction, meas, rep, s_seed, None
                            )
                        continue
                    hist = label_histogram(sample.nodes, partition)
                    kl = kl_divergence(full_hist, hist)
                    ratio = entropy_ratio(
                        partition.labels_for(sample.nodes), full_labels, region
                    )
                    result.add(
                        spec.dataset, entry["name"], fraction, f"kl:{region}", rep, s_seed, kl
                    )
                    result.add(
                        spec.dataset,
                        entry["name"],
                        fraction,
                        f"entropy_ratio:{region}",
                        rep,
                        s_seed,
                        ratio,
                    )
    return result


RUNNERS = {
    "centrality_comparison": run_centrality_comparison,
    "community": run_community_experiment,
    "attribute": run_attribute_experiment,
}


def run_experiment(spec: ExperimentSpec) -> RunResult:
    return RUNNERS[spec.kind](spec)


# -- report merging ---------------------------------------------------


def read_raw_csv(path) -> list:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RAW_HEADER:
            raise ValidationError(f"{path}: unexpected schema {header}")
        for rec in reader:
            row = dict(zip(RAW_HEADER, rec))
            row["fraction"] = float(row["fraction"])
            row["repetition"] = int(row["repetition"])
            row["rng_seed"] = int(row["rng_seed"])
            row["value"] = float(row["value"]) if row["value"] != "" else None
            rows.append(row)
    return rows


def merge_results(results_dir) -> tuple[list, list]:
    """Merge every raw.csv under ``results_dir``; returns (rows, summary)."""
    paths = sorted(Path(results_dir).rglob("raw.csv"))
    if not paths:
        raise ValidationError(f"no raw.csv files under {results_dir}")
    rows = []
    bad = []
    for p in paths:
        try:
            rows.extend(read_raw_csv(p))
        except ValidationError as exc:
            bad.append(str(exc))
    if bad:
        raise ValidationError("schema mismatch:\n" + "\n".join(bad))
    return rows, aggregate_rows(rows)
