"""End-to-end experiment pipeline: sweep grid -> CSV tables.

For every sweep point and repetition the pipeline generates (or loads)
the underlying network, assigns categories, samples a forest,
reconstructs, and evaluates — emitting long-format rows into four
tables, one per figure family:

* ``precision.csv``  — coalescing precision per run
* ``community.csv``  — community precision and NMI per run
* ``rank.csv``       — rank correlations of vertex properties per run
* ``epidemic.csv``   — immunization strategy outcomes

Per-run errors (stalled reconstructions, degenerate metrics) are
recorded in ``errors.csv`` and the sweep continues.  All randomness is
derived from the master seed and parameter *values*, so a rerun of the
same config writes byte-identical tables, sweep-axis order does not
matter, and --jobs only changes wall time, never content.
"""

from __future__ import annotations

import csv
import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import lru_cache

import numpy as np

from .attributes import (AttributeMap, CategoryDistribution, assign_attributes,
                         discretized_normal, make_assortative, uniform_distribution)
from .communities import DetectorConfig, detect
from .config import ExperimentConfig, SweepPoint, parse_strategy
from .epidemic import SirParams, StrategySpec, evaluate_strategy
from .generate import LfrParams, generate_lfr_like
from .graph import Graph, load_edge_list
from .metrics import (aggregate_by_projection, coalescing_precision,
                      community_precision, nmi, project, spearman,
                      vertex_properties)
from .reconstruct import ReconResult, ReconstructionStalled, reconstruct
from .sampling import SampleForest, elicit_friends, sample_paths, true_network
from .seeding import derive_seed

__all__ = ["run_pipeline", "metric_rows_for_point", "epidemic_rows_for_point",
           "PARAM_HEADER", "METRIC_HEADER", "EPIDEMIC_HEADER", "ERROR_HEADER"]

PARAM_HEADER = ["run_id", "network", "method", "assortative", "distribution",
                "g", "c", "f", "mu", "n_t_rule", "n_t_frac", "rep"]
METRIC_HEADER = PARAM_HEADER + ["metric", "value", "repetitions"]
EPIDEMIC_HEADER = PARAM_HEADER + ["strategy", "property", "budget",
                                  "metric", "value", "repetitions"]
ERROR_HEADER = PARAM_HEADER + ["stage", "error"]


def _fmt(x) -> str:
    if x is None:
        return "na"
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def run_id_for(point: SweepPoint, rep) -> str:
    h = hashlib.sha256(f"{point.key()}|{rep}".encode()).hexdigest()
    return h[:10]


def _param_cells(cfg: ExperimentConfig, point: SweepPoint, rep) -> list[str]:
    name = cfg.edgelist_path if cfg.network == "edgelist" else "lfr"
    return [run_id_for(point, rep), str(name), point.method,
            _fmt(point.assortative), cfg.distribution, str(point.g),
            str(point.c), str(point.f), _fmt(point.mu), cfg.n_t_rule,
            _fmt(point.n_t_frac), str(rep)]


@lru_cache(maxsize=4)
def _load_edgelist(path: str) -> Graph:
    return load_edge_list(path)


def _network(cfg: ExperimentConfig, point: SweepPoint, rep) -> Graph:
    if cfg.network == "edgelist":
        return _load_edgelist(cfg.edgelist_path)
    params = LfrParams(n=cfg.n, k_avg=cfg.k_avg, k_max=cfg.k_max, mu=point.mu,
                       tau1=cfg.tau1, tau2=cfg.tau2, c_min=cfg.c_min,
                       c_max=cfg.c_max,
                       seed=derive_seed(cfg.seed, "generate", repr(point.mu), rep))
    graph, _ = generate_lfr_like(params)
    return graph


def _distribution(cfg: ExperimentConfig, g: int) -> CategoryDistribution:
    if cfg.distribution == "uniform":
        return uniform_distribution(g)
    return discretized_normal(g)


def _attributes(cfg: ExperimentConfig, point: SweepPoint, rep,
                graph: Graph) -> tuple[AttributeMap, CategoryDistribution]:
    dist = _distribution(cfg, point.g)
    attrs = assign_attributes(
        graph.n, dist,
        derive_seed(cfg.seed, "attributes", point.g, cfg.distribution, rep))
    if point.assortative:
        attrs = make_assortative(
            graph, attrs, cfg.assort_attempts_per_vertex * graph.n,
            derive_seed(cfg.seed, "assortative", point.g, rep))
    return attrs, dist


def _sample_and_reconstruct(cfg: ExperimentConfig, point: SweepPoint, rep,
                            graph: Graph, attrs: AttributeMap,
                            dist: CategoryDistribution,
                            errors: list | None, cells: list[str]):
    """Shared sampling + reconstruction step; returns (forest, result).

    A stalled reconstruction is recorded as an error (when ``errors`` is
    given) and its partial result is used — what was coalesced so far is
    still a network.
    """
    n = graph.n
    if cfg.n_t_rule == "fraction-of-n":
        n_t_target = max(1, round(point.n_t_frac * n))
        n_r = max(1, round(n_t_target / 2))
    else:
        n_t_target = None
        n_r = max(1, round(cfg.n_r_frac * n))
    paths = sample_paths(graph, n_r, point.method,
                         derive_seed(cfg.seed, "paths", point.method, rep))
    forest = elicit_friends(graph, attrs, paths, point.f, point.c,
                            derive_seed(cfg.seed, "friends", point.method,
                                        point.f, rep))
    n_t = forest.n_t if n_t_target is None else min(n_t_target, forest.size)
    n_t = max(n_t, forest.n_r)
    try:
        result = reconstruct(forest.without_truth(), dist, n_t,
                             derive_seed(cfg.seed, "reconstruct", point.key(), rep))
    except ReconstructionStalled as exc:
        if errors is not None:
            errors.append(cells + ["reconstruct", str(exc)])
        result = exc.partial
    return forest, result


def metric_rows_for_point(cfg: ExperimentConfig, point: SweepPoint, rep: int):
    """Compute one repetition's precision/community/rank rows."""
    rows_prec: list[list[str]] = []
    rows_comm: list[list[str]] = []
    rows_rank: list[list[str]] = []
    errors: list[list[str]] = []
    cells = _param_cells(cfg, point, rep)

    def metric_row(metric: str, value: float) -> list[str]:
        return cells + [metric, _fmt(float(value)), "1"]

    try:
        graph = _network(cfg, point, rep)
        attrs, dist = _attributes(cfg, point, rep, graph)
        forest, result = _sample_and_reconstruct(
            cfg, point, rep, graph, attrs, dist, errors, cells)
    except Exception as exc:  # config-level/feasibility failures
        errors.append(cells + ["setup", str(exc)])
        return rows_prec, rows_comm, rows_rank, errors

    try:
        rows_prec.append(metric_row("coalescing_precision",
                                    coalescing_precision(result.log, forest.truth)))
    except Exception as exc:
        errors.append(cells + ["precision", str(exc)])

    try:
        tnet, _ = true_network(forest)
        proj = project(result.provenance, forest)
        recon_labels = detect(result.graph, DetectorConfig(
            seed=derive_seed(cfg.seed, "communities", "recon", point.key(), rep)))
        tnet_labels = detect(tnet, DetectorConfig(
            seed=derive_seed(cfg.seed, "communities", "true", point.key(), rep)))
        proj_dense = np.searchsorted(tnet.labels, proj)
        rows_comm.append(metric_row(
            "community_precision",
            community_precision(recon_labels, tnet_labels, proj_dense)))
        rows_comm.append(metric_row(
            "nmi", nmi(recon_labels, tnet_labels[proj_dense])))
    except Exception as exc:
        errors.append(cells + ["community", str(exc)])
        recon_labels = None
        proj = None

    if proj is not None:
        try:
            under_labels = detect(graph, DetectorConfig(
                seed=derive_seed(cfg.seed, "communities", "underlying",
                                 _fmt(point.mu), rep)))
            u_deg, u_kout, u_emb = vertex_properties(graph, under_labels)
            r_deg, r_kout, r_emb = vertex_properties(result.graph, recon_labels)
            for name, uvals, rvals in (("degree", u_deg, r_deg),
                                       ("k_out", u_kout, r_kout),
                                       ("embeddedness", u_emb, r_emb)):
                try:
                    ids, means = aggregate_by_projection(rvals, proj)
                    rows_rank.append(metric_row(
                        f"spearman_{name}", spearman(uvals[ids], means)))
                except Exception as exc:
                    errors.append(cells + [f"rank:{name}", str(exc)])
        except Exception as exc:
            errors.append(cells + ["rank", str(exc)])

    return rows_prec, rows_comm, rows_rank, errors


def _pinned_point(cfg: ExperimentConfig, method: str,
                  n_t_frac: float | None) -> SweepPoint:
    """The sweep cell the epidemic block runs at: first value of each axis."""
    return SweepPoint(method=method, assortative=cfg.assortative[0],
                      g=cfg.g[0], c=cfg.c[0], f=cfg.f[0],
                      mu=cfg.mu[0] if cfg.network == "lfr" else None,
                      n_t_frac=n_t_frac)


def epidemic_rows_for_point(cfg: ExperimentConfig, method: str,
                            n_t_frac: float | None, rep: int = 0):
    """Build a reconstruction ensemble and score every strategy/budget."""
    rows: list[list[str]] = []
    errors: list[list[str]] = []
    point = _pinned_point(cfg, method, n_t_frac)
    cells = _param_cells(cfg, point, rep)
    try:
        graph = _network(cfg, point, rep)
        attrs, dist = _attributes(cfg, point, rep, graph)
        ensemble: list[Graph] = []
        projections: list[np.ndarray] = []
        for i in range(cfg.ensemble):
            icells = _param_cells(cfg, point, f"{rep}.{i}")
            forest, result = _sample_and_reconstruct(
                cfg, point, f"{rep}.{i}", graph, attrs, dist, errors, icells)
            ensemble.append(result.graph)
            projections.append(project(result.provenance, forest))
    except Exception as exc:
        errors.append(cells + ["epidemic-setup", str(exc)])
        return rows, errors

    sir = SirParams(init_frac=cfg.sir_init_frac, beta=cfg.sir_beta,
                    infectious_steps=cfg.sir_steps)
    for token in cfg.strategies:
        kind, prop = parse_strategy(token)
        needs_ensemble = kind.startswith("reconstructed")
        for budget in cfg.budgets:
            count = max(1, round(budget * graph.n))
            spec = StrategySpec(kind=kind, budget=count, property=prop,
                                ensemble_size=cfg.ensemble)
            seed = derive_seed(cfg.seed, "epidemic", point.key(), kind, prop,
                               repr(budget), rep)
            try:
                out = evaluate_strategy(
                    graph, spec, sir, cfg.sir_runs, seed,
                    ensemble=ensemble if needs_ensemble else None,
                    projections=projections if needs_ensemble else None)
            except Exception as exc:
                errors.append(cells + [f"epidemic:{token}", str(exc)])
                continue
            base = cells + [kind, prop, _fmt(float(budget))]
            rows.append(base + ["epidemic_size_mean", _fmt(out.mean),
                                str(out.runs)])
            rows.append(base + ["epidemic_size_std", _fmt(out.std),
                                str(out.runs)])
    return rows, errors


# -- top-level driver ------------------------------------------------------


def _metric_task(args):
    cfg, point, rep = args
    return metric_rows_for_point(cfg, point, rep)


def _epidemic_task(args):
    cfg, method, nt = args
    return epidemic_rows_for_point(cfg, method, nt)


def _write_csv(path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def run_pipeline(cfg: ExperimentConfig, jobs: int = 1,
                 stage: str = "all") -> dict[str, str]:
    """Run the sweep and write the result tables under ``cfg.out``.

    ``stage`` limits the work: "metrics" (the three per-run tables),
    "epidemic", or "all".  Returns a name -> path map of written files.
    """
    if stage not in ("all", "metrics", "epidemic"):
        raise ValueError(f"unknown stage {stage!r}")
    cfg.validate()
    os.makedirs(cfg.out, exist_ok=True)
    rows_prec: list[list[str]] = []
    rows_comm: list[list[str]] = []
    rows_rank: list[list[str]] = []
    rows_epi: list[list[str]] = []
    errors: list[list[str]] = []

    written: dict[str, str] = {}
    if stage in ("all", "metrics"):
        tasks = [(cfg, point, rep)
                 for point in cfg.points()
                 for rep in range(cfg.repetitions)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_metric_task, tasks, chunksize=1))
        else:
            results = [_metric_task(t) for t in tasks]
        for rp, rc, rr, errs in results:
            rows_prec.extend(rp)
            rows_comm.extend(rc)
            rows_rank.extend(rr)
            errors.extend(errs)
        for name, rows in (("precision", rows_prec), ("community", rows_comm),
                           ("rank", rows_rank)):
            path = os.path.join(cfg.out, f"{name}.csv")
            _write_csv(path, METRIC_HEADER, rows)
            written[name] = path

    if stage in ("all", "epidemic"):
        epi_tasks = []
        if cfg.epidemic:
            nts = cfg.n_t_frac if cfg.n_t_rule == "fraction-of-n" else (None,)
            epi_tasks = [(cfg, m, nt) for m in cfg.method for nt in nts]
        if jobs > 1 and epi_tasks:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                eresults = list(pool.map(_epidemic_task, epi_tasks, chunksize=1))
        else:
            eresults = [_epidemic_task(t) for t in epi_tasks]
        for rows, errs in eresults:
            rows_epi.extend(rows)
            errors.extend(errs)
        path = os.path.join(cfg.out, "epidemic.csv")
        _write_csv(path, EPIDEMIC_HEADER, rows_epi)
        written["epidemic"] = path

    epath = os.path.join(cfg.out, "errors.csv")
    _write_csv(epath, ERROR_HEADER, errors)
    written["errors"] = epath
    return written
