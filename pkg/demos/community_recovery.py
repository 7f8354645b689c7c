"""
Community structure survives reconstruction
===========================================

Reconstructed networks are noisy — yet their community structure often
agrees well with the communities of the true sampled subgraph.  The
agreement gets markedly better when the category labels correlate with
the ties themselves (assortative labeling), because then the category
evidence carries community information too.
"""

import numpy as np

from netrecon import (DetectorConfig, LfrParams, ReconstructionStalled,
                      assign_attributes, detect, discretized_normal,
                      elicit_friends, generate_lfr_like, make_assortative,
                      modularity, nmi, project, reconstruct, sample_paths,
                      true_network)

params = LfrParams(n=600, k_avg=10, k_max=30, mu=0.1, tau1=2.5, tau2=1,
                   c_min=15, c_max=50, seed=31)
net, _ = generate_lfr_like(params)
dist = discretized_normal(150)
base = assign_attributes(net.n, dist, seed=32)

# Assortative variant: same multiset of labels, swapped until neighbors
# tend to share nearby categories.
sorted_attrs = make_assortative(net, base, attempts=100 * net.n, seed=33)

for name, attrs in (("independent labels", base),
                    ("assortative labels", sorted_attrs)):
    paths = sample_paths(net, 48, "rpm", seed=34)
    forest = elicit_friends(net, attrs, paths, max_friends=5, width=1, seed=35)
    try:
        res = reconstruct(forest.without_truth(), dist, forest.n_t, seed=36)
    except ReconstructionStalled as stall:
        res = stall.partial

    # communities on the reconstruction vs. on the true sampled subgraph
    found = detect(res.graph, DetectorConfig(seed=37))
    tnet, _ = true_network(forest)
    truth = detect(tnet, DetectorConfig(seed=38))

    # align the two partitions: each reconstructed vertex projects to the
    # person most of its member occurrences point at
    proj = np.searchsorted(tnet.labels, project(res.provenance, forest))
    agreement = nmi(found, truth[proj])

    print(f"{name}:")
    print(f"  reconstruction: {res.graph.n} vertices, {res.graph.m} edges, "
          f"{int(found.max()) + 1} communities "
          f"(modularity {modularity(res.graph, found):.3f})")
    print(f"  sampled truth:  {tnet.n} vertices, {tnet.m} edges, "
          f"{int(truth.max()) + 1} communities")
    print(f"  partition agreement (NMI): {agreement:.3f}\n")

print("Same interviews, same people — but when categories align with")
print("ties, coalescing keeps community boundaries much cleaner.")
