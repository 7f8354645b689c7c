"""Synthetic benchmark networks with planted communities.

The generator follows the usual recipe for community benchmarks: draw a
power-law degree sequence, draw power-law community sizes, split each
vertex's degree into an internal and an external part according to the
mixing fraction, and wire both parts with a configuration-model style
stub matching, repairing self-loops and duplicates.

One practical wrinkle is honored explicitly: a vertex of degree k placed
in a community of size s can host at most s-1 internal edges, so its
external fraction cannot go below (k-s+1)/k.  When the requested mixing
is below that floor for some vertices, the remaining vertices' external
fractions are scaled down so the *mean* external fraction still matches
the request whenever that is arithmetically possible; otherwise the
generator gets as close as it can (the realized value is measurable with
:func:`realized_mixing`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

__all__ = ["LfrParams", "generate_lfr_like", "realized_mixing"]


@dataclass(frozen=True)
class LfrParams:
    """Parameters for :func:`generate_lfr_like`.

    n: vertex count; k_avg/k_max: target mean and maximum degree;
    mu: requested mixing fraction in [0, 1]; tau1/tau2: power-law
    exponents for degrees and community sizes; c_min/c_max: community
    size bounds; seed: RNG seed.
    """

    n: int
    k_avg: float
    k_max: int
    mu: float
    tau1: float
    tau2: float
    c_min: int
    c_max: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError("mu must lie in [0, 1]")
        if self.k_max >= self.n:
            raise ValueError("k_max must be below n")
        if self.k_max < 2 or self.k_avg < 2:
            raise ValueError("degree targets must be at least 2")
        if self.k_avg > self.k_max:
            raise ValueError("k_avg cannot exceed k_max")
        if not 1 <= self.c_min <= self.c_max <= self.n:
            raise ValueError("need 1 <= c_min <= c_max <= n")
        if self.tau1 <= 1 or self.tau2 <= 0:
            raise ValueError("power-law exponents out of range")


def _power_law_pmf(exponent: float, lo: int, hi: int) -> np.ndarray:
    k = np.arange(lo, hi + 1, dtype=float)
    w = k ** (-exponent)
    return w / w.sum()


def _degree_cutoff(k_avg: float, k_max: int, tau1: float) -> int:
    """Smallest-|error| integer lower cutoff so the pmf mean hits k_avg."""
    best_lo, best_err = None, None
    for lo in range(2, k_max + 1):
        pmf = _power_law_pmf(tau1, lo, k_max)
        mean = float(np.arange(lo, k_max + 1) @ pmf)
        err = abs(mean - k_avg)
        if best_err is None or err < best_err:
            best_lo, best_err = lo, err
    if best_err > 0.12 * k_avg:
        raise ValueError(
            f"cannot reach mean degree {k_avg} with exponent {tau1} "
            f"and maximum degree {k_max}")
    return best_lo


def _community_sizes(params: LfrParams, rng: np.random.Generator) -> np.ndarray:
    """Power-law community sizes in [c_min, c_max] summing exactly to n."""
    n, c_min, c_max = params.n, params.c_min, params.c_max
    k0 = -(-n // c_max)  # ceil
    if k0 * c_min > n:
        raise ValueError(
            f"no community count k satisfies k*{c_min} <= {n} <= k*{c_max}")
    support = np.arange(c_min, c_max + 1)
    pmf = _power_law_pmf(params.tau2, c_min, c_max)
    for _ in range(500):
        sizes: list[int] = []
        total = 0
        ok = True
        while total < n:
            remaining = n - total
            if c_min <= remaining <= c_max:
                sizes.append(remaining)
                total = n
                break
            if remaining < 2 * c_min:
                ok = False  # any draw would leave an unfillable gap
                break
            # keep the leftover fillable: size <= remaining - c_min
            cap = min(c_max, remaining - c_min)
            s = int(rng.choice(support, p=pmf))
            if s > cap:
                s = int(rng.integers(c_min, cap + 1))
            sizes.append(s)
            total += s
        if ok and total == n:
            return np.asarray(sizes, dtype=np.int64)
    raise ValueError("could not partition n into community sizes in range")


def _assign_communities(degrees: np.ndarray, sizes: np.ndarray, mu: float,
                        rng: np.random.Generator) -> np.ndarray:
    """Place vertices into fixed-size communities, capacity-aware.

    Vertices are processed in random order; each picks uniformly among
    communities that still have a free slot and are large enough to host
    the vertex's internal degree target.  If none qualifies, the largest
    community with a free slot is used (its capacity shortfall is later
    absorbed by the external-degree floor).
    """
    n = degrees.size
    labels = np.empty(n, dtype=np.int64)
    free = sizes.copy()
    demand = np.ceil((1.0 - mu) * degrees).astype(np.int64)
    for v in rng.permutation(n):
        fits = (free > 0) & (sizes - 1 >= demand[v])
        if fits.any():
            choices = np.flatnonzero(fits)
        else:
            open_ = np.flatnonzero(free > 0)
            top = sizes[open_].max()
            choices = open_[sizes[open_] == top]
        c = int(rng.choice(choices))
        labels[v] = c
        free[c] -= 1
    return labels


def _external_targets(degrees: np.ndarray, labels: np.ndarray,
                      sizes: np.ndarray, mu: float,
                      rng: np.random.Generator) -> np.ndarray:
    """Integer external degree per vertex, mean fraction steered to mu."""
    k = degrees.astype(float)
    cap = (sizes[labels] - 1).astype(float)
    floor_frac = np.maximum(0.0, degrees - cap) / k
    low = floor_frac < mu
    deficit = mu * degrees.size - floor_frac.sum()
    if deficit <= 0 or not low.any():
        lam = 0.0
    else:
        lam = min(1.0, deficit / (mu - floor_frac[low]).sum())
    frac = floor_frac.copy()
    frac[low] = floor_frac[low] + lam * (mu - floor_frac[low])
    target = frac * k
    ext = np.floor(target).astype(np.int64)
    ext += (rng.random(degrees.size) < (target - ext)).astype(np.int64)
    lo = np.maximum(0, degrees - cap.astype(np.int64))
    return np.clip(ext, lo, degrees)


def _fix_parity(degrees, ext, labels, n_comm, rng):
    """Make each community's internal stub count and the external pool even."""
    internal = degrees - ext
    for c in range(n_comm):
        members = np.flatnonzero(labels == c)
        if internal[members].sum() % 2 == 0:
            continue
        cand = members[internal[members] > 0]
        if cand.size == 0:
            continue
        v = int(cand[np.argmax(internal[cand])])
        internal[v] -= 1
        if ext.sum() > 0:
            ext[v] += 1  # move the stub outward
        else:
            degrees[v] -= 1  # no external pool: drop the stub
    if ext.sum() % 2 == 1:
        cand = np.flatnonzero(ext > 0)
        v = int(rng.choice(cand))
        ext[v] -= 1
        degrees[v] -= 1
    return degrees, ext, internal


def _havel_hakimi_edges(members: np.ndarray, targets: np.ndarray,
                        rng: np.random.Generator) -> list[tuple[int, int]]:
    """Simple graph on ``members`` hitting ``targets`` degrees exactly.

    Standard largest-first construction; realizes every graphical
    sequence, and degrades gracefully (connecting to whoever remains)
    when the remainder is not graphical.  The result is deterministic,
    so :func:`_randomize_edges` is applied afterwards.
    """
    work = [(int(t), int(v)) for t, v in zip(targets, members) if t > 0]
    edges: list[tuple[int, int]] = []
    while work:
        work.sort(key=lambda tv: (-tv[0], tv[1]))
        t, v = work[0]
        rest = work[1:]
        take = min(t, len(rest))
        for i in range(take):
            tt, vv = rest[i]
            rest[i] = (tt - 1, vv)
            edges.append((min(v, vv), max(v, vv)))
        work = [(tt, vv) for tt, vv in rest if tt > 0]
    return edges


def _randomize_edges(edges: list[tuple[int, int]], rng: np.random.Generator,
                     rounds: int = 10) -> list[tuple[int, int]]:
    """Shuffle a fixed-degree simple graph by double-edge swaps."""
    if len(edges) < 2:
        return edges
    edge_set = set(edges)
    edges = list(edges)
    n_e = len(edges)
    for _ in range(rounds * n_e):
        i, j = rng.integers(0, n_e, size=2)
        if i == j:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4:
            continue
        e1 = (min(a, d), max(a, d))
        e2 = (min(c, b), max(c, b))
        if e1 in edge_set or e2 in edge_set:
            continue
        edge_set.discard(edges[i])
        edge_set.discard(edges[j])
        edge_set.add(e1)
        edge_set.add(e2)
        edges[i], edges[j] = e1, e2
    return edges


def _match_stubs(stubs: np.ndarray, rng: np.random.Generator,
                 labels: np.ndarray, existing: set,
                 passes: int = 80) -> list[tuple[int, int]]:
    """Pair stubs into simple edges crossing community labels.

    Collisions (self-pair, same community, duplicate) are repaired by
    random partner swaps; unrepairable pairs are dropped.
    """
    stubs = stubs.copy()
    rng.shuffle(stubs)
    if stubs.size % 2 == 1:
        stubs = stubs[:-1]
    if stubs.size == 0:
        return []
    a, b = stubs[0::2].copy(), stubs[1::2].copy()

    def bad_mask():
        bad = labels[a] == labels[b]  # same community covers self-pairs
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        seen: dict[tuple[int, int], int] = {}
        dup = np.zeros(a.size, dtype=bool)
        for i in range(a.size):
            if bad[i]:
                continue
            key = (int(lo[i]), int(hi[i]))
            if key in existing or key in seen:
                dup[i] = True
            else:
                seen[key] = i
        return bad | dup

    for _ in range(passes):
        bad = bad_mask()
        idx = np.flatnonzero(bad)
        if idx.size == 0:
            break
        partners = rng.integers(0, a.size, size=idx.size)
        for i, j in zip(idx, partners):
            b[i], b[j] = b[j], b[i]
    bad = bad_mask()
    edges = []
    for i in np.flatnonzero(~bad):
        u, v = int(a[i]), int(b[i])
        key = (min(u, v), max(u, v))
        edges.append(key)
        existing.add(key)
    return edges


def generate_lfr_like(params: LfrParams) -> tuple[Graph, np.ndarray]:
    """Generate a benchmark graph and its planted community partition.

    Returns ``(graph, partition)`` where ``partition[v]`` is a dense
    community label.  Deterministic for a fixed parameter set.  Raises
    ``ValueError`` when the parameters are infeasible (no community size
    arrangement exists, or the degree distribution cannot reach the
    requested mean).
    """
    rng = np.random.default_rng(params.seed)
    sizes = _community_sizes(params, rng)

    k_lo = _degree_cutoff(params.k_avg, params.k_max, params.tau1)
    support = np.arange(k_lo, params.k_max + 1)
    degrees = rng.choice(support, size=params.n,
                         p=_power_law_pmf(params.tau1, k_lo, params.k_max))

    labels = _assign_communities(degrees, sizes, params.mu, rng)
    ext = _external_targets(degrees, labels, sizes, params.mu, rng)
    degrees = degrees.copy()
    degrees, ext, internal = _fix_parity(degrees, ext, labels, sizes.size, rng)

    edges: list[tuple[int, int]] = []
    for c in range(sizes.size):
        members = np.flatnonzero(labels == c)
        within = _havel_hakimi_edges(members, internal[members], rng)
        edges.extend(_randomize_edges(within, rng))
    existing: set[tuple[int, int]] = set()
    pool = np.repeat(np.arange(params.n), ext)
    edges.extend(_match_stubs(pool, rng, labels=labels, existing=existing))

    graph = Graph.from_edges(params.n, np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return graph, labels


def realized_mixing(g: Graph, partition: np.ndarray) -> float:
    """Mean over non-isolated vertices of their cross-community degree share.

    For each vertex with degree > 0, the fraction of its neighbors lying
    in a different community; isolated vertices are excluded from the
    average.
    """
    part = np.asarray(partition)
    if part.shape != (g.n,):
        raise ValueError("partition must assign a label to every vertex")
    deg = g.degrees
    live = deg > 0
    if not live.any():
        raise ValueError("graph has no edges")
    rows = np.repeat(np.arange(g.n), deg)
    cross = part[rows] != part[g.indices]
    cross_count = np.bincount(rows, weights=cross, minlength=g.n)
    return float((cross_count[live] / deg[live]).mean())
