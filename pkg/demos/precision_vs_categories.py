"""
Category resolution drives reconstruction precision
===================================================

Coalescing merges two recorded occurrences when their category evidence
says they are plausibly the same person.  The finer the category scale,
the fewer innocent collisions — watch precision climb as the same
population is described with 25, 50, 100, 200, then 400 categories.
"""

import numpy as np

from netrecon import (LfrParams, ReconstructionStalled, assign_attributes,
                      coalescing_precision, discretized_normal,
                      elicit_friends, generate_lfr_like, reconstruct,
                      sample_paths)

REPS = 5

# One population, re-labeled at different category resolutions.
params = LfrParams(n=400, k_avg=8, k_max=25, mu=0.2, tau1=2.5, tau2=1,
                   c_min=10, c_max=40, seed=21)
net, _ = generate_lfr_like(params)
print(f"population: {net.n} people, {net.m} ties")
print(f"{REPS} sampling repetitions per resolution\n")

print("categories   mean precision")
for g in (25, 50, 100, 200, 400):
    dist = discretized_normal(g)
    scores = []
    for rep in range(REPS):
        attrs = assign_attributes(net.n, dist, seed=100 * g + rep)
        paths = sample_paths(net, 32, "rpm", seed=200 * g + rep)
        forest = elicit_friends(net, attrs, paths, max_friends=5, width=1,
                                seed=300 * g + rep)
        # ask for exactly as many vertices as there are real people;
        # if the evidence cannot support that many merges, keep the
        # partial result — whatever was coalesced still counts
        try:
            res = reconstruct(forest.without_truth(), dist, forest.n_t,
                              seed=400 * g + rep)
        except ReconstructionStalled as stall:
            res = stall.partial
        scores.append(coalescing_precision(res.log, forest.truth))
    print(f"{g:>10d}   {np.mean(scores):14.3f}")

print("\nSharper categories mean each merge is backed by rarer evidence,")
print("so a larger share of merges hits the same real person.")
