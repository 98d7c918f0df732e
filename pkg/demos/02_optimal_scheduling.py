#!/usr/bin/env python3
"""Optimal waiting-time assignment on a fixed 7-node tree.

The tree: sink adopts {0,1,2}; 1 has children {3,4}; 2 has child 5; 4 has
child 6; every node is a source. At D=2 only three sources can reach the
sink in time; at D=3 all seven participate. Also shows re-scheduling for a
shorter deadline by shifting waiting times down.
"""

from aggtree import build_from_parents, optimal_schedule, reduce_deadline, validate_schedule
from aggtree.scheduler import dump_schedule
from aggtree.topology import SINK, from_edges

edges = [(0, SINK), (1, SINK), (2, SINK), (3, 1), (4, 1), (5, 2), (6, 4)]
topo = from_edges(7, edges)
tree = build_from_parents({0: SINK, 1: SINK, 2: SINK, 3: 1, 4: 1, 5: 2, 6: 4}, topo)

for d in (2, 3):
    sched = optimal_schedule(tree, d, topo)
    print(f"deadline {d}: phi = {sched.phi}")
    print(dump_schedule(sched))

sched3 = optimal_schedule(tree, 3, topo)
reduced = reduce_deadline(sched3, 3, 2)
print(f"schedule for D=3 shifted down to D=2: phi = {reduced.phi}, "
      f"violations = {validate_schedule(tree, 2, reduced)}")
