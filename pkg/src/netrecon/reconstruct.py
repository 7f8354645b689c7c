"""Probabilistic coalescing of a sample forest into a network.

Every occurrence in the forest starts as its own group.  Pairs of groups
are then repeatedly drawn from a candidate index and merged with a
probability that reflects how likely the two occurrences are to be the
same underlying person, given the category information:

* respondent-respondent pairs never merge (respondents are distinct by
  construction of vertex-disjoint paths);
* a respondent u and a friend description d_v merge with probability
  1 / (n_t * Pr(d_v)), provided u's exact category lies inside d_v and
  the two groups are not currently adjacent (a respondent is never its
  own friend);
* two friend descriptions merge with probability
  Pr(d_u ∩ d_v) / (n_t * Pr(d_u) * Pr(d_v)), provided the intersection
  is nonempty and the groups share no respondent neighbor (one person
  is named at most once by the same respondent).

Probabilities are clamped to 1.  ``n_t`` — the size of the network being
reconstructed — is an explicit input; merging stops when the group count
reaches it.  The category distribution is likewise an explicit input:
nothing in this module reads the forest's sealed truth mapping.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from .attributes import CategoryDistribution
from .graph import Graph
from .sampling import FRIEND, RESPONDENT, Description, SampleForest

__all__ = [
    "MergeEvent",
    "ReconResult",
    "ReconState",
    "ReconstructionStalled",
    "pr_description",
    "pair_probability",
    "reconstruct",
]


@dataclass(frozen=True)
class MergeEvent:
    """One accepted merge: member occurrences of both sides + probability."""

    members_a: tuple[int, ...]
    members_b: tuple[int, ...]
    probability: float


@dataclass(frozen=True)
class ReconResult:
    """A reconstructed network.

    ``graph`` is the coalesced simple graph; ``provenance[occ]`` gives
    the reconstructed vertex each forest occurrence ended up in;
    ``log`` lists the merge events in order; ``attempts`` counts drawn
    candidate pairs (including rejected draws).
    """

    graph: Graph
    provenance: np.ndarray
    log: list[MergeEvent]
    attempts: int


class ReconstructionStalled(RuntimeError):
    """Raised when the target size is unreachable with the attempt budget.

    Carries the partial result so callers can inspect or keep what was
    coalesced so far.
    """

    def __init__(self, message: str, partial: ReconResult):
        super().__init__(message)
        self.partial = partial


def pr_description(description: Description, dist: CategoryDistribution):
    """Probability mass of the category interval under ``dist``.

    Returns 0 when the distribution has no support on the interval; the
    type of the result follows the distribution's entries (floats
    normally, exact rationals when the distribution holds Fractions).
    """
    return dist.interval_prob(description.lo, description.hi)


class ReconState:
    """Mutable state of a coalescing run.

    Groups are indexed by the occurrence id of their first member; dead
    group slots stay in the arrays but are flagged.  The candidate pair
    index holds every alive pair that is not respondent-respondent and
    whose payload intervals overlap — a cheap superset of the pairs with
    positive merge probability (adjacency-based exclusions are applied
    when the probability is evaluated).
    """

    def __init__(self, forest: SampleForest, dist: CategoryDistribution, n_t: int):
        if dist.g != forest.g:
            raise ValueError("distribution and forest disagree on category count")
        n = forest.size
        self.n_t = int(n_t)
        self.dist = dist
        self.kind = forest.kind.copy()
        self.lo = forest.lo.copy()
        self.hi = forest.hi.copy()
        self.alive = np.ones(n, dtype=bool)
        self.n_alive = n
        self.members: list[list[int]] = [[i] for i in range(n)]
        self.adj: list[set[int]] = [set() for _ in range(n)]
        child = np.flatnonzero(forest.parent >= 0)
        for c in child:
            p = int(forest.parent[c])
            self.adj[p].add(int(c))
            self.adj[int(c)].add(p)
        # cumulative masses for O(1) interval probabilities; length g+1
        p = dist.p
        if p.dtype == object:
            self._cum = list(accumulate(p, initial=p[0] - p[0]))
        else:
            self._cum = np.concatenate([[0.0], np.cumsum(p)])
        self._build_pairs()

    # -- candidate pair index ------------------------------------------

    def _compatible_partners(self, i: int) -> np.ndarray:
        """Alive groups whose payload overlaps i's, kind-compatible, != i."""
        mask = self.alive & (self.lo <= self.hi[i]) & (self.lo[i] <= self.hi)
        if self.kind[i] == RESPONDENT:
            mask &= self.kind == FRIEND
        mask[i] = False
        return np.flatnonzero(mask)

    def _build_pairs(self) -> None:
        self.pairs: list[tuple[int, int]] = []
        self._pos: dict[tuple[int, int], int] = {}
        self.partners: list[set[int]] = [set() for _ in range(self.kind.size)]
        n = self.kind.size
        for i in range(n):
            js = self._compatible_partners(i)
            for j in js[js > i]:
                self._add_pair(i, int(j))

    def _add_pair(self, a: int, b: int) -> None:
        key = (a, b) if a < b else (b, a)
        if key in self._pos:
            return
        self._pos[key] = len(self.pairs)
        self.pairs.append(key)
        self.partners[a].add(b)
        self.partners[b].add(a)

    def _remove_pair(self, a: int, b: int) -> None:
        key = (a, b) if a < b else (b, a)
        idx = self._pos.pop(key, None)
        if idx is None:
            return
        last = self.pairs.pop()
        if idx < len(self.pairs):
            self.pairs[idx] = last
            self._pos[last] = idx
        self.partners[a].discard(b)
        self.partners[b].discard(a)

    # -- probabilities ---------------------------------------------------

    def interval_prob(self, lo: int, hi: int):
        """Mass of categories lo..hi via the cached cumulative sums."""
        val = self._cum[hi] - self._cum[lo - 1]
        zero = self._cum[0]
        return val if val > zero else zero

    def group_description(self, i: int) -> Description:
        return Description(int(self.lo[i]), int(self.hi[i]))

    # -- merging ---------------------------------------------------------

    def merge(self, a: int, b: int) -> int:
        """Coalesce groups a and b; returns the surviving group id.

        A respondent group always survives and keeps its exact category;
        two friend groups collapse onto the smaller id with the interval
        intersection as payload.
        """
        if a == b or not (self.alive[a] and self.alive[b]):
            raise ValueError("merge needs two distinct alive groups")
        if self.kind[a] == RESPONDENT and self.kind[b] == RESPONDENT:
            raise ValueError("respondent groups never merge")
        if self.kind[b] == RESPONDENT:
            a, b = b, a
        elif self.kind[a] == FRIEND and b < a:
            a, b = b, a
        s, o = a, b  # survivor, absorbed
        if self.kind[s] == FRIEND:
            self.lo[s] = max(self.lo[s], self.lo[o])
            self.hi[s] = min(self.hi[s], self.hi[o])
            if self.lo[s] > self.hi[s]:
                raise ValueError("merging groups with disjoint descriptions")
        self.members[s].extend(self.members[o])
        self.members[o] = []
        for grp in (s, o):
            for x in list(self.partners[grp]):
                self._remove_pair(grp, x)
        for x in self.adj[o]:
            self.adj[x].discard(o)
            if x != s:
                self.adj[x].add(s)
                self.adj[s].add(x)
        self.adj[s].discard(o)
        self.adj[o] = set()
        self.alive[o] = False
        self.n_alive -= 1
        for x in self._compatible_partners(s):
            self._add_pair(s, int(x))
        return s

    def check_invariants(self, forest: SampleForest) -> None:
        """Debug/test hook: verify structural invariants of the state."""
        alive_ids = np.flatnonzero(self.alive)
        seen: set[int] = set()
        for i in alive_ids:
            occs = self.members[i]
            assert occs, "alive group with no members"
            assert not (set(occs) & seen), "occurrence in two groups"
            seen.update(occs)
            kinds = forest.kind[list(occs)]
            assert (kinds == RESPONDENT).sum() <= 1, "two respondents in one group"
            if self.kind[i] == FRIEND:
                assert self.lo[i] <= self.hi[i], "empty friend description"
            for x in self.adj[i]:
                assert self.alive[x] and x != i, "edge to dead group or self"
                assert i in self.adj[x], "asymmetric adjacency"
        assert len(seen) == forest.size, "lost occurrences"


def pair_probability(state: ReconState, a: int, b: int):
    """Merge probability for groups a, b under the current state.

    Symmetric in its arguments, clamped to 1, and exactly zero whenever
    a structural rule forbids the merge (two respondents, current
    adjacency, category mismatch, shared respondent neighbor, or a
    description with no support under the distribution).
    """
    if a == b:
        raise ValueError("a pair needs two distinct groups")
    if not (state.alive[a] and state.alive[b]):
        raise ValueError("both groups must be alive")
    ka, kb = state.kind[a], state.kind[b]
    if ka == RESPONDENT and kb == RESPONDENT:
        return 0.0
    if b in state.adj[a]:
        return 0.0
    if ka == FRIEND and kb == FRIEND:
        common = state.adj[a] & state.adj[b]
        if any(state.kind[x] == RESPONDENT for x in common):
            return 0.0
        lo = max(state.lo[a], state.lo[b])
        hi = min(state.hi[a], state.hi[b])
        if lo > hi:
            return 0.0
        pa = state.interval_prob(int(state.lo[a]), int(state.hi[a]))
        pb = state.interval_prob(int(state.lo[b]), int(state.hi[b]))
        if pa <= 0 or pb <= 0:
            return 0.0
        p = state.interval_prob(int(lo), int(hi)) / (state.n_t * pa * pb)
    else:
        r, f = (a, b) if ka == RESPONDENT else (b, a)
        cat = int(state.lo[r])
        if not (state.lo[f] <= cat <= state.hi[f]):
            return 0.0
        pf = state.interval_prob(int(state.lo[f]), int(state.hi[f]))
        if pf <= 0:
            return 0.0
        p = 1 / (state.n_t * pf)
    return min(1, p)


def _result(state: ReconState, log: list[MergeEvent], attempts: int) -> ReconResult:
    alive_ids = np.flatnonzero(state.alive)
    dense = {int(gid): i for i, gid in enumerate(alive_ids)}
    prov = np.empty(state.kind.size, dtype=np.int64)
    for gid, vid in dense.items():
        for occ in state.members[gid]:
            prov[occ] = vid
    edges = []
    for gid, vid in dense.items():
        for x in state.adj[gid]:
            if gid < x:
                edges.append((vid, dense[int(x)]))
    graph = Graph.from_edges(alive_ids.size, np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return ReconResult(graph, prov, log, attempts)


def reconstruct(forest: SampleForest, dist: CategoryDistribution, n_t: int,
                seed: int, max_attempts: int | None = None,
                validate: bool = False) -> ReconResult:
    """Coalesce ``forest`` down to ``n_t`` vertices.

    Draws uniformly among candidate pairs (all overlapping, kind-
    compatible group pairs) and merges each drawn pair with its current
    pair probability.  A rejected draw leaves the pair in play.  Stops
    when the group count reaches ``n_t``.

    Raises :class:`ReconstructionStalled` — carrying the partial result —
    if no candidate pairs remain or the attempt budget (default
    ``1000 * forest.size``) runs out first.  ``validate=True`` checks
    state invariants after every merge (slow; for tests).
    """
    n = forest.size
    n_resp = forest.n_r
    if not 1 <= n_t <= n:
        raise ValueError(f"target size must lie in [1, {n}]")
    if n_t < n_resp:
        raise ValueError(
            f"target size {n_t} is below the respondent count {n_resp}; "
            "respondents never coalesce with each other")
    if max_attempts is None:
        max_attempts = 1000 * n
    state = ReconState(forest, dist, n_t)
    rng = np.random.default_rng(seed)
    log: list[MergeEvent] = []
    attempts = 0
    while state.n_alive > n_t:
        if not state.pairs:
            raise ReconstructionStalled(
                f"no candidate pairs left at size {state.n_alive} (target {n_t})",
                _result(state, log, attempts))
        if attempts >= max_attempts:
            raise ReconstructionStalled(
                f"attempt budget {max_attempts} exhausted at size {state.n_alive} "
                f"(target {n_t})", _result(state, log, attempts))
        attempts += 1
        a, b = state.pairs[int(rng.integers(len(state.pairs)))]
        p = pair_probability(state, a, b)
        if p <= 0:
            continue
        if p < 1 and rng.random() >= float(p):
            continue
        log.append(MergeEvent(tuple(sorted(state.members[a])),
                              tuple(sorted(state.members[b])),
                              float(p)))
        state.merge(a, b)
        if validate:
            state.check_invariants(forest)
    return _result(state, log, attempts)
