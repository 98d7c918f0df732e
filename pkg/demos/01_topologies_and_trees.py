#!/usr/bin/env python3
"""Build communication graphs and initial aggregation trees.

Generates a random geometric deployment, checks connectivity, and compares
the initial tree constructions (greedy incremental, power-ranked fast init,
BFS, chain) by depth profile and achievable quality.
"""

from aggtree import generate_rgg, is_connected, make_complete, optimal_phi
from aggtree.init_trees import fast_init_tree, git_tree, synthetic_tree
from aggtree.topology import SINK

D = 6

topo = generate_rgg(60, 300, 300, 75, (150, 300), 0.8, seed=7)
print(f"60-sensor deployment, 300m field, 75m range: connected={is_connected(topo)}")
print(f"sources: {topo.num_sources}, edges: {len(topo.edges())}")

trees = {
    "git": git_tree(topo),
    "fast": fast_init_tree(topo, D),
    "bfs": synthetic_tree(topo, "bfs"),
}
for name, tree in trees.items():
    depth = max(tree.depth(i) for i in range(60))
    fanout = len(tree.children(SINK))
    phi = optimal_phi(tree, D, topo)
    print(f"{name:>5}: max depth {depth:2d}, sink fanout {fanout:2d}, phi at D={D}: {phi}")

# the chain needs a Hamiltonian path, guaranteed on a complete graph
small = make_complete(8)
chain = synthetic_tree(small, "chain")
print(f"\nchain on a complete 8-sensor graph: phi at D=3 is "
      f"{optimal_phi(chain, 3, small)} (worst case equals the deadline)")
