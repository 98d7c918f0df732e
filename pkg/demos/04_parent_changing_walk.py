#!/usr/bin/env python3
"""The parent-changing random walk, and the analytics behind it.

Runs the chain from the greedy tree with both local estimators, shows how
the best-seen quality climbs, then computes the softmax stationary
distribution, the approximation gap, and the distance between the chain's
empirical occupancy and the ideal distribution on a tiny instance.
"""

import numpy as np

from aggtree import (
    approximation_gap,
    canonical_key,
    enumerate_spanning_trees,
    log_sum_exp_value,
    optimal_phi,
    run,
    stationary_distribution,
    tv_distance,
)
from aggtree.experiment import ScenarioConfig, connected_topology
from aggtree.init_trees import git_tree
from aggtree.markov_engine import MarkovConfig

D = 5
cfg = ScenarioConfig(field_side=200.0, node_counts=(25,), comm_range=70.0,
                     sink_pos=(100.0, 200.0), source_fraction=0.8,
                     deadline=("fixed", D))
topo, _ = connected_topology(25, cfg, 2)
start = git_tree(topo)
print(f"25 sensors, start tree phi = {optimal_phi(start, D, topo)}")
for estimator in ("approx1", "approx2"):
    mc = MarkovConfig(alpha=0.2, beta=2.0, iterations=150, estimator=estimator, seed=9)
    res = run(mc, topo, D, start)
    accepted = sum(r.accepted for r in res.trajectory)
    print(f"{estimator}: best phi {res.best_phi} after 150 expirations "
          f"({accepted} accepted moves)")

# analytics on an instance small enough to enumerate
tiny = ScenarioConfig(field_side=100.0, node_counts=(5,), comm_range=50.0,
                      sink_pos=(50.0, 50.0), source_fraction=1.0,
                      deadline=("fixed", 2))
topo5, _ = connected_topology(5, tiny, 21)
trees = list(enumerate_spanning_trees(topo5))
phis = [optimal_phi(t, 2, topo5) for t in trees]
beta = 1.0
pstar = stationary_distribution(phis, beta)
print(f"\n{len(trees)} trees on the 5-sensor instance, "
      f"max phi {max(phis)}, softmax value {log_sum_exp_value(phis, beta):.3f}, "
      f"gap bound {approximation_gap(len(trees), beta):.3f}")

mc = MarkovConfig(alpha=0.2, beta=beta, iterations=50_000, estimator="exact", seed=3)
res = run(mc, topo5, 2, git_tree(topo5), collect_states=True)
keys = [canonical_key(t) for t in trees]
occ = {}
for key, rate in res.state_log:
    occ[key] = occ.get(key, 0.0) + 1.0 / rate
total = sum(occ.values())
emp = np.array([occ.get(k, 0.0) / total for k in keys])
print(f"empirical occupancy vs softmax after 50k steps: tv = {tv_distance(emp, pstar):.3f}")
