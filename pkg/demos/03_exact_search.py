#!/usr/bin/env python3
"""Exhaustive search over every spanning tree of a small deployment.

Streams all sink-rooted spanning trees, reports the quality distribution,
and compares the exhaustive optimum against the fast initial tree and the
greedy baseline.
"""

from collections import Counter

from aggtree import enumerate_spanning_trees, optimal_phi, z_optimal
from aggtree.experiment import ScenarioConfig, connected_topology
from aggtree.init_trees import fast_init_tree, git_tree

D = 3
cfg = ScenarioConfig(field_side=100.0, node_counts=(9,), comm_range=45.0,
                     sink_pos=(50.0, 100.0), source_fraction=1.0,
                     deadline=("fixed", D))
topo, seed = connected_topology(9, cfg, 5)
print(f"9-sensor deployment (seed {seed}), {len(topo.edges())} edges")

phis = Counter(optimal_phi(t, D, topo) for t in enumerate_spanning_trees(topo))
total = sum(phis.values())
print(f"{total} spanning trees; phi distribution at D={D}:")
for phi in sorted(phis):
    print(f"  phi={phi}: {phis[phi]:5d} trees ({100.0 * phis[phi] / total:.1f}%)")

best_tree, best = z_optimal(topo, D)
print(f"\nexhaustive optimum: {best}")
print(f"fast initial tree:  {optimal_phi(fast_init_tree(topo, D), D, topo)}")
print(f"greedy incremental: {optimal_phi(git_tree(topo), D, topo)}")
