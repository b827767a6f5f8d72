"""Command-line surface: sample, centrality, experiment run, report."""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import yaml

from . import __version__
from .centrality import MEASURES, betweenness
from .errors import NetsampleError, PartialSampleError
from .experiments import (
    EXACT_BETWEENNESS_LIMIT,
    ExperimentSpec,
    merge_results,
    run_experiment,
    write_raw_csv,
    write_summary_csv,
)
from .graph import load_edge_list
from .samplers import SAMPLERS, SamplerConfig
from .synth import SbmSpec, generate_sbm

import numpy as np


def _wrap_errors(fn):
    @functools.wraps(fn)
    def inner(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PartialSampleError as exc:
            raise click.ClickException(f"partial sample: {exc}") from exc
        except NetsampleError as exc:
            raise click.ClickException(str(exc)) from exc

    return inner


def _load_graph(edge_list, sbm, directed):
    if (edge_list is None) == (sbm is None):
        raise click.UsageError("provide exactly one of --edge-list or --sbm")
    if edge_list is not None:
        g, _ = load_edge_list(edge_list, directed=directed)
        return g, None
    with open(sbm, "r", encoding="utf-8") as fh:
        g, partition = generate_sbm(SbmSpec(**yaml.safe_load(fh)))
    return g, partition


@click.group()
@click.version_option(version=__version__)
def cli():
    """Graph-sampling toolkit: samplers, centrality measures, experiments."""


@cli.command()
@click.option("--edge-list", type=click.Path(exists=True), help="SNAP-style edge list.")
@click.option("--sbm", type=click.Path(exists=True), help="YAML file with SBM parameters.")
@click.option("--directed/--undirected", default=True, show_default=True)
@click.option("--sampler", type=click.Choice(sorted(SAMPLERS)), required=True)
@click.option("--size", type=int, help="Absolute sample size.")
@click.option("--fraction", type=float, help="Sample size as a fraction of n.")
@click.option("--seed-node", type=int, multiple=True, help="Starting node(s).")
@click.option("--rng-seed", type=int, default=0, show_default=True)
@click.option("--alpha", type=float, default=None, help="In-degree mixing weight.")
@click.option("--exploration-p", type=float, default=0.1, show_default=True)
@click.option("--leaderboard-capacity", type=int, default=100, show_default=True)
@click.option("--rw-init-fraction", type=float, default=0.2, show_default=True)
@click.option("--damping", type=float, default=0.85, show_default=True)
@click.option("--rescore-on-pop", is_flag=True, default=False)
@click.option("--p", "n2v_p", type=float, default=2.0, show_default=True, help="node2vec return parameter.")
@click.option("--q", "n2v_q", type=float, default=0.5, show_default=True, help="node2vec in-out parameter.")
@click.option("--output", type=click.Path(), required=True, help="Output prefix.")
@_wrap_errors
def sample(
    edge_list,
    sbm,
    directed,
    sampler,
    size,
    fraction,
    seed_node,
    rng_seed,
    alpha,
    exploration_p,
    leaderboard_capacity,
    rw_init_fraction,
    damping,
    rescore_on_pop,
    n2v_p,
    n2v_q,
    output,
):
    """Run one sampler and write the node list plus JSON metadata."""
    g, _ = _load_graph(edge_list, sbm, directed)
    if (size is None) == (fraction is None):
        raise click.UsageError("provide exactly one of --size or --fraction")
    m = size if size is not None else max(1, min(g.n, round(fraction * g.n)))
    cfg = SamplerConfig(
        target_size=m,
        rw_init_fraction=rw_init_fraction,
        leaderboard_capacity=leaderboard_capacity,
        alpha=alpha,
        exploration_p=exploration_p,
        damping=damping,
        seed_nodes=seed_node,
        rng_seed=rng_seed,
        rescore_on_pop=rescore_on_pop,
    )
    fn = SAMPLERS[sampler]
    if sampler == "node2vec":
        result = fn(g, cfg, p=n2v_p, q=n2v_q)
    else:
        result = fn(g, cfg)
    out = Path(output)
    result.save(out.with_suffix(".json"), out.with_suffix(".nodes.txt"))
    click.echo(f"sampled {len(result.nodes)} nodes -> {out.with_suffix('.json')}")


@cli.command()
@click.option("--edge-list", type=click.Path(exists=True))
@click.option("--sbm", type=click.Path(exists=True))
@click.option("--directed/--undirected", default=True, show_default=True)
@click.option("--measure", type=click.Choice(sorted(MEASURES)), required=True)
@click.option("--gamma", type=float, default=0.85, show_default=True, help="PageRank damping.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--max-iter", type=int, default=1000, show_default=True)
@click.option("--reg", type=float, default=1.0, show_default=True, help="SpringRank regularization.")
@click.option("--exact/--approximate", "exact", default=True, show_default=True, help="Betweenness mode.")
@click.option("--pivots", type=int, default=200, show_default=True, help="Betweenness pivot count.")
@click.option("--pivot-seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(), required=True, help="CSV output path.")
@_wrap_errors
def centrality(
    edge_list, sbm, directed, measure, gamma, tol, max_iter, reg, exact, pivots, pivot_seed, output
):
    """Compute one centrality measure over the whole graph; write CSV."""
    g, _ = _load_graph(edge_list, sbm, directed)
    if measure == "pagerank":
        vec = MEASURES[measure](g, gamma=gamma, tol=tol, max_iter=max_iter)
    elif measure == "eigenvector":
        vec = MEASURES[measure](g, tol=tol, max_iter=max_iter)
    elif measure == "springrank":
        vec = MEASURES[measure](g, reg=reg)
    elif measure == "betweenness":
        if exact:
            if g.n > EXACT_BETWEENNESS_LIMIT:
                raise click.ClickException(
                    f"exact betweenness refused for n={g.n} > {EXACT_BETWEENNESS_LIMIT}; "
                    "use --approximate with --pivots"
                )
            vec = betweenness(g)
        else:
            rng = np.random.default_rng(pivot_seed)
            sources = sorted(
                int(v) for v in rng.choice(g.n, size=min(pivots, g.n), replace=False)
            )
            vec = betweenness(g, sources=sources)
    else:
        vec = MEASURES[measure](g)
    vec.save_csv(output)
    if not vec.converged:
        click.echo(f"warning: {measure} did not converge (residual {vec.residual:g})", err=True)
    click.echo(f"{measure} scores for {g.n} nodes -> {output}")


@cli.group()
def experiment():
    """Declarative experiment runner."""


@experiment.command("run")
@click.argument("spec_path", type=click.Path(exists=True))
@click.option("--output-dir", type=click.Path(), default=None, help="Override spec output_dir.")
@_wrap_errors
def experiment_run(spec_path, output_dir):
    """Run the experiment described by a YAML spec file."""
    spec = ExperimentSpec.from_yaml(spec_path)
    if output_dir is not None:
        spec.output_dir = output_dir
    result = run_experiment(spec)
    result.save(spec.output_dir)
    click.echo(f"{len(result.rows)} rows -> {spec.output_dir}/raw.csv")


@cli.command()
@click.argument("results_dir", type=click.Path(exists=True))
@click.option("--output-dir", type=click.Path(), required=True)
@_wrap_errors
def report(results_dir, output_dir):
    """Merge experiment outputs into one long-format CSV + JSON summary."""
    rows, summary = merge_results(results_dir)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_raw_csv(out / "merged_raw.csv", rows)
    write_summary_csv(out / "merged_summary.csv", summary)
    meta = {
        "rows": len(rows),
        "cells": len(summary),
        "datasets": sorted({r["dataset"] for r in rows}),
        "samplers": sorted({r["sampler"] for r in rows}),
        "measures": sorted({r["measure"] for r in rows}),
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(f"merged {len(rows)} rows from {results_dir} -> {out}")


def main():
    cli(prog_name="netsample")


if __name__ == "__main__":
    sys.exit(main())
