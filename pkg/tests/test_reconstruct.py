"""Coalescing: pair probabilities, merge mechanics, full reconstruction."""

from fractions import Fraction

import numpy as np
import pytest

from netrecon import (
    FRIEND,
    RESPONDENT,
    CategoryDistribution,
    Description,
    LfrParams,
    ReconState,
    ReconstructionStalled,
    assign_attributes,
    assign_distinct,
    coalescing_precision,
    elicit_friends,
    generate_lfr_like,
    pair_probability,
    pr_description,
    reconstruct,
    sample_paths,
    true_network,
    uniform_distribution,
)
from netrecon.sampling import SampleForest

from oracles import groups_of, replay_merges

UNIFORM50 = uniform_distribution(50)
EXACT50 = CategoryDistribution(50, np.array([Fraction(1, 50)] * 50, dtype=object))


def hand_forest():
    """Two chained respondents, each naming friends with known intervals.

      occ 0  respondent, category 34
      occ 1  friend of 0, interval [33, 34]
      occ 2  respondent, category 10 (next on the path)
      occ 3  friend of 2, interval [34, 36]
      occ 4  respondent, category 20
      occ 5  friend of 4, interval [36, 40]
      occ 6  friend of 0, interval [34, 35]  (second report by occ 0)
    """
    return SampleForest(
        tree=[0] * 7,
        parent=[-1, 0, 0, 2, 2, 4, 0],
        kind=[RESPONDENT, FRIEND, RESPONDENT, FRIEND, RESPONDENT, FRIEND, FRIEND],
        lo=[34, 33, 10, 34, 20, 36, 34],
        hi=[34, 34, 10, 36, 20, 40, 35],
        g=50,
    )


def test_pr_description():
    assert pr_description(Description(34, 36), UNIFORM50) == pytest.approx(3 / 50)
    assert pr_description(Description(34, 36), EXACT50) == Fraction(3, 50)
    spike = np.zeros(10)
    spike[0] = 1.0
    assert pr_description(Description(5, 7), CategoryDistribution(10, spike)) == 0.0


def test_pair_probability_respondent_friend():
    # respondent 0 (category 34) against the non-adjacent friend [34, 36]:
    # 1 / (n_t * Pr([34,36])) = 50 / (3 * 25), below the clamp at n_t = 25
    state = ReconState(hand_forest(), UNIFORM50, n_t=25)
    assert pair_probability(state, 0, 3) == pytest.approx(50 / (3 * 25))
    state = ReconState(hand_forest(), UNIFORM50, n_t=10)
    # same pair at n_t = 10: the raw ratio 5/3 caps at one
    assert pair_probability(state, 0, 3) == 1.0
    # category outside the interval
    assert pair_probability(state, 2, 1) == 0.0
    # adjacency: a respondent is never its own report
    assert pair_probability(state, 0, 1) == 0.0


def test_pair_probability_friend_friend():
    state = ReconState(hand_forest(), UNIFORM50, n_t=10)
    # [33,34] x [34,36]: intersection {34}
    assert pair_probability(state, 1, 3) == pytest.approx(50 / (6 * 10))
    # [34,36] x [36,40]: intersection {36}
    assert pair_probability(state, 3, 5) == pytest.approx(10 / (3 * 10))
    # disjoint intervals
    assert pair_probability(state, 1, 5) == 0.0
    # same reporting respondent
    assert pair_probability(state, 1, 6) == 0.0


def test_pair_probability_respondent_pair_and_errors():
    state = ReconState(hand_forest(), UNIFORM50, n_t=10)
    assert pair_probability(state, 0, 2) == 0.0
    assert pair_probability(state, 0, 4) == 0.0
    with pytest.raises(ValueError):
        pair_probability(state, 3, 3)


def test_pair_probability_exact_rationals():
    # n_t values keeping 50 / (6 n_t) below the clamp
    for n_t in (9, 10, 33):
        state = ReconState(hand_forest(), EXACT50, n_t=n_t)
        p = pair_probability(state, 1, 3)
        assert isinstance(p, Fraction)
        assert p == Fraction(50, 6 * n_t)


def test_pair_probability_clamps_to_one():
    state = ReconState(hand_forest(), UNIFORM50, n_t=1)
    # the raw ratio 50/3 exceeds 1
    assert pair_probability(state, 0, 3) == 1
    exact = ReconState(hand_forest(), EXACT50, n_t=1)
    assert pair_probability(exact, 1, 3) == 1


def test_zero_support_description():
    p = np.zeros(50)
    p[:10] = 0.1
    dist = CategoryDistribution(50, p)  # no mass above category 10
    state = ReconState(hand_forest(), dist, n_t=10)
    assert pair_probability(state, 1, 3) == 0.0  # Pr([34,36]) = 0


def test_state_rejects_mismatched_distribution():
    with pytest.raises(ValueError):
        ReconState(hand_forest(), uniform_distribution(20), n_t=10)


def test_merge_respondent_absorbs_friend():
    f = hand_forest()
    state = ReconState(f, UNIFORM50, n_t=5)
    survivor = state.merge(3, 0)  # respondent must survive either way
    assert survivor == 0
    assert state.kind[0] == RESPONDENT
    assert state.lo[0] == state.hi[0] == 34  # exact category kept
    assert sorted(state.members[0]) == [0, 3]
    assert not state.alive[3]
    # friend 3's adjacency to respondent 2 transferred to the survivor
    assert 2 in state.adj[0] and 0 in state.adj[2]
    state.check_invariants(f)


def test_merge_friends_intersect_payloads():
    f = hand_forest()
    state = ReconState(f, UNIFORM50, n_t=5)
    survivor = state.merge(3, 1)
    assert survivor == 1  # smaller id wins for friend pairs
    assert (state.lo[1], state.hi[1]) == (34, 34)
    assert sorted(state.members[1]) == [1, 3]
    state.check_invariants(f)
    # a second merge with a now-disjoint interval must refuse
    with pytest.raises(ValueError):
        state.merge(1, 5)  # [34,34] x [36,40]


def test_merge_rejects_respondent_pair():
    state = ReconState(hand_forest(), UNIFORM50, n_t=5)
    with pytest.raises(ValueError):
        state.merge(0, 2)


@pytest.fixture(scope="module")
def sampled():
    params = LfrParams(n=120, k_avg=6, k_max=18, mu=0.3, tau1=2.5, tau2=1.0,
                       c_min=10, c_max=30, seed=21)
    g, _ = generate_lfr_like(params)
    return g


def test_reconstruct_validates_target(sampled):
    g = sampled
    attrs = assign_attributes(g.n, uniform_distribution(10), seed=1)
    paths = sample_paths(g, 20, "rpm", seed=2)
    forest = elicit_friends(g, attrs, paths, 3, 1, seed=3)
    dist = uniform_distribution(10)
    with pytest.raises(ValueError):
        reconstruct(forest, dist, 0, seed=0)
    with pytest.raises(ValueError):
        reconstruct(forest, dist, forest.size + 1, seed=0)
    with pytest.raises(ValueError):
        reconstruct(forest, dist, forest.n_r - 1, seed=0)  # below respondent count


def test_reconstruct_perfect_information(sampled):
    """Distinct categories leave no ambiguity: every merge is correct and
    every reconstructed edge is a real one."""
    g = sampled
    attrs = assign_distinct(g.n, seed=4)
    dist = uniform_distribution(g.n)
    for seed in range(5):
        paths = sample_paths(g, 25, "rpm", seed=10 + seed)
        forest = elicit_friends(g, attrs, paths, 5, 1, seed=20 + seed)
        res = reconstruct(forest.without_truth(), dist, forest.n_t,
                          seed=30 + seed, validate=True)
        assert res.graph.n == forest.n_t
        assert coalescing_precision(res.log, forest.truth) == 1.0
        tnet, dense = true_network(forest)
        true_edges = {(int(tnet.labels[u]), int(tnet.labels[v]))
                      for u, v in tnet.edges()}
        person = {}
        for occ in range(forest.size):
            person[int(res.provenance[occ])] = int(forest.truth[occ])
        for u, v in res.graph.edges():
            a, b = person[int(u)], person[int(v)]
            assert (min(a, b), max(a, b)) in true_edges


def test_reconstruct_is_deterministic(sampled):
    g = sampled
    attrs = assign_attributes(g.n, uniform_distribution(8), seed=5)
    dist = uniform_distribution(8)
    paths = sample_paths(g, 30, "rpm", seed=6)
    forest = elicit_friends(g, attrs, paths, 4, 1, seed=7)
    target = forest.size - 15
    a = reconstruct(forest, dist, target, seed=8)
    b = reconstruct(forest, dist, target, seed=8)
    assert (a.provenance == b.provenance).all()
    assert (a.graph.edges() == b.graph.edges()).all()
    assert a.log == b.log
    c = reconstruct(forest, dist, target, seed=9)
    assert (c.provenance != a.provenance).any()


def test_reconstruct_ignores_truth(sampled):
    g = sampled
    attrs = assign_attributes(g.n, uniform_distribution(8), seed=10)
    dist = uniform_distribution(8)
    paths = sample_paths(g, 30, "rpm", seed=11)
    forest = elicit_friends(g, attrs, paths, 4, 1, seed=12)
    target = forest.size - 15
    with_truth = reconstruct(forest, dist, target, seed=13)
    without = reconstruct(forest.without_truth(), dist, target, seed=13)
    assert (with_truth.provenance == without.provenance).all()
    assert (with_truth.graph.edges() == without.graph.edges()).all()


def test_merge_log_replay_matches_provenance(sampled):
    """Replaying the merge log from singleton groups reproduces exactly
    the grouping the provenance array reports."""
    g = sampled
    attrs = assign_attributes(g.n, uniform_distribution(5), seed=14)
    dist = uniform_distribution(5)
    paths = sample_paths(g, 30, "rpm", seed=15)
    forest = elicit_friends(g, attrs, paths, 4, 2, seed=16)
    res = reconstruct(forest, dist, forest.size - 25, seed=17, validate=True)
    assert res.log  # crowded categories: merges certainly happened
    assert replay_merges(forest.size, res.log) == groups_of(res.provenance)
    for ev in res.log:
        assert 0.0 < ev.probability <= 1.0
    assert res.attempts >= len(res.log)


def test_reconstruct_stalls_when_target_unreachable(sampled):
    """With every category distinct, occurrences of different people can
    never merge, so a target below the true network size stalls."""
    g = sampled
    attrs = assign_distinct(g.n, seed=18)
    dist = uniform_distribution(g.n)
    paths = sample_paths(g, 20, "rpm", seed=19)
    forest = elicit_friends(g, attrs, paths, 5, 1, seed=20)
    target = forest.n_r  # well below n_t: unreachable without bad merges
    assert target < forest.n_t
    with pytest.raises(ReconstructionStalled) as info:
        reconstruct(forest.without_truth(), dist, target, seed=21)
    partial = info.value.partial
    assert partial.graph.n > target
    # whatever was coalesced is still perfectly clean
    if partial.log:
        assert coalescing_precision(partial.log, forest.truth) == 1.0
