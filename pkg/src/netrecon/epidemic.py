"""Discrete-time SIR epidemics and immunization strategies.

The simulation is synchronous: at every step each infectious vertex
independently infects each of its susceptible, non-immunized neighbors
with probability beta, and a vertex recovers exactly
``infectious_steps`` steps after its own infection.  The epidemic size
is the number of vertices ever infected (seeds included).

Immunization strategies pick a budget of vertices to remove from the
susceptible pool before seeding — either from the underlying network
(the unrealistic full-knowledge baseline), at random, or from an
ensemble of reconstructions whose vertices are projected back onto
underlying ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .communities import DetectorConfig, detect
from .graph import Graph
from .metrics import vertex_properties
from .seeding import derive_seed

__all__ = [
    "SirParams",
    "StrategySpec",
    "EpidemicOutcome",
    "sir_run",
    "select_immunized",
    "evaluate_strategy",
]

STRATEGY_KINDS = (
    "underlying-top",
    "reconstructed-top",
    "random-whole",
    "reconstructed-frequency-random",
)

PROPERTIES = ("degree", "k_out", "embeddedness-low")


@dataclass(frozen=True)
class SirParams:
    """init_frac: initially infected fraction; beta: per-contact, per-step
    transmission probability; infectious_steps: steps until recovery."""

    init_frac: float = 0.002
    beta: float = 0.08
    infectious_steps: int = 4

    def __post_init__(self):
        if not 0 < self.init_frac <= 1:
            raise ValueError("init_frac must lie in (0, 1]")
        if not 0 <= self.beta <= 1:
            raise ValueError("beta must lie in [0, 1]")
        if self.infectious_steps < 1:
            raise ValueError("infectious_steps must be positive")


@dataclass(frozen=True)
class StrategySpec:
    """kind: one of STRATEGY_KINDS; property: ranking property for the
    top-k kinds; budget: how many vertices to immunize; ensemble_size:
    how many reconstructions inform the reconstructed-* kinds."""

    kind: str
    budget: int
    property: str = "degree"
    ensemble_size: int = 100

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.property not in PROPERTIES:
            raise ValueError(f"unknown ranking property {self.property!r}")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be positive")


@dataclass(frozen=True)
class EpidemicOutcome:
    mean: float
    std: float
    runs: int


def sir_run(g: Graph, immunized: np.ndarray, params: SirParams, seed: int) -> int:
    """One epidemic; returns the number of vertices ever infected.

    Seeds max(1, round(init_frac * n)) uniform vertices among the
    non-immunized.  Raises if everyone (or too many to seed) is
    immunized.
    """
    rng = np.random.default_rng(seed)
    immune = np.zeros(g.n, dtype=bool)
    imm = np.asarray(immunized, dtype=np.int64)
    if imm.size:
        immune[imm] = True
    pool = np.flatnonzero(~immune)
    if pool.size == 0:
        raise ValueError("every vertex is immunized; nothing to infect")
    n_seed = max(1, round(params.init_frac * g.n))
    if n_seed > pool.size:
        raise ValueError("not enough non-immunized vertices to seed")
    seeds = rng.choice(pool, size=n_seed, replace=False)

    susceptible = ~immune
    susceptible[seeds] = False
    timer = np.zeros(g.n, dtype=np.int64)
    timer[seeds] = params.infectious_steps
    total = int(n_seed)
    indptr, indices = g.indptr, g.indices
    while True:
        infectious = np.flatnonzero(timer > 0)
        if infectious.size == 0:
            break
        contacts = np.concatenate(
            [indices[indptr[v]:indptr[v + 1]] for v in infectious])
        if contacts.size:
            hits = contacts[rng.random(contacts.size) < params.beta]
            new = np.unique(hits)
            new = new[susceptible[new]]
        else:
            new = np.zeros(0, dtype=np.int64)
        timer[infectious] -= 1
        if new.size:
            susceptible[new] = False
            timer[new] = params.infectious_steps
            total += int(new.size)
    return total


def _ranking_values(graph: Graph, prop: str, seed: int) -> np.ndarray:
    """Property values used for top-k ranking on one graph."""
    if prop == "degree":
        return graph.degrees.astype(float)
    part = detect(graph, DetectorConfig(seed=derive_seed(seed, "detect")))
    deg, k_out, emb = vertex_properties(graph, part)
    return k_out.astype(float) if prop == "k_out" else emb


def select_immunized(g: Graph, strategy: StrategySpec, seed: int,
                     ensemble: list[Graph] | None = None,
                     projections: list[np.ndarray] | None = None) -> np.ndarray:
    """Choose the vertices (underlying ids) a strategy immunizes.

    For the reconstructed-* kinds, ``ensemble`` holds reconstruction
    graphs and ``projections`` the matching reconstructed-vertex ->
    underlying-id maps.  A vertex's score is averaged over all
    reconstructed vertices projecting to it; its frequency is the number
    of ensemble instances it appears in.  Ordering is by score (low
    embeddedness ranks first for "embeddedness-low"), then frequency,
    then vertex id; the frequency strategy orders by frequency with
    random tie-breaking.  Raises when the budget exceeds the candidate
    pool.
    """
    if strategy.budget > g.n:
        raise ValueError("budget exceeds the vertex count")
    rng = np.random.default_rng(derive_seed(seed, "select", strategy.kind,
                                            strategy.property))
    k = strategy.budget
    if k == 0:
        return np.zeros(0, dtype=np.int64)

    if strategy.kind == "random-whole":
        return np.sort(rng.choice(g.n, size=k, replace=False))

    if strategy.kind == "underlying-top":
        vals = _ranking_values(g, strategy.property, seed)
        asc = strategy.property == "embeddedness-low"
        key = vals if asc else -vals
        order = np.lexsort((np.arange(g.n), key))
        return np.sort(order[:k])

    if ensemble is None or projections is None:
        raise ValueError(f"{strategy.kind} needs a reconstruction ensemble")
    if len(ensemble) != len(projections):
        raise ValueError("ensemble and projections must align")

    sums = np.zeros(g.n)
    occs = np.zeros(g.n, dtype=np.int64)   # reconstructed vertices mapping here
    freq = np.zeros(g.n, dtype=np.int64)   # instances containing the vertex
    for inst, (rg, proj) in enumerate(zip(ensemble, projections)):
        proj = np.asarray(proj, dtype=np.int64)
        if proj.size != rg.n:
            raise ValueError(f"projection {inst} does not cover the graph")
        vals = _ranking_values(rg, strategy.property, derive_seed(seed, "inst", inst))
        np.add.at(sums, proj, vals)
        np.add.at(occs, proj, 1)
        freq[np.unique(proj)] += 1
    pool = np.flatnonzero(freq > 0)
    if k > pool.size:
        raise ValueError(
            f"budget {k} exceeds the {pool.size} vertices seen in the ensemble")

    if strategy.kind == "reconstructed-frequency-random":
        jitter = rng.permutation(g.n)  # random tie order among equal frequencies
        order = np.lexsort((jitter[pool], -freq[pool]))
        return np.sort(pool[order[:k]])

    score = sums[pool] / occs[pool]
    asc = strategy.property == "embeddedness-low"
    key = score if asc else -score
    order = np.lexsort((pool, -freq[pool], key))
    return np.sort(pool[order[:k]])


def evaluate_strategy(g: Graph, strategy: StrategySpec, params: SirParams,
                      runs: int, seed: int,
                      ensemble: list[Graph] | None = None,
                      projections: list[np.ndarray] | None = None) -> EpidemicOutcome:
    """Mean/std epidemic size over ``runs`` independently seeded epidemics."""
    if runs < 1:
        raise ValueError("need at least one run")
    chosen = select_immunized(g, strategy, derive_seed(seed, "immunize"),
                              ensemble=ensemble, projections=projections)
    sizes = np.array([
        sir_run(g, chosen, params, derive_seed(seed, "sir", i))
        for i in range(runs)
    ], dtype=float)
    std = float(sizes.std(ddof=1)) if runs > 1 else 0.0
    return EpidemicOutcome(float(sizes.mean()), std, runs)
