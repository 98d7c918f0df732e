"""Shared test utilities: seeded random instances and independent oracles."""

import numpy as np

from aggtree.topology import SINK, from_edges, generate_rgg, is_connected
from aggtree.agg_tree import AggregationTree


def random_connected_topology(v, seed, range_scale=0.42, source_fraction=0.8):
    """Small connected RGG on the unit-ish square, regenerating until connected."""
    s = seed
    while True:
        topo = generate_rgg(v, 100, 100, 100 * range_scale, (50, 0), source_fraction, s)
        if is_connected(topo):
            return topo
        s += 1


def random_spanning_tree(topo, seed):
    """Uniform-ish random sink-rooted spanning tree by randomized growth."""
    rng = np.random.default_rng(seed)
    parent = {}
    attached = [SINK]
    attached_set = {SINK}
    remaining = set(range(topo.num_sensors))
    while remaining:
        frontier = [
            (u, x)
            for x in attached
            for u in topo.neighbors(x)
            if u in remaining
        ]
        if not frontier:
            raise AssertionError("topology not connected")
        u, x = frontier[int(rng.integers(len(frontier)))]
        parent[u] = x
        attached.append(u)
        attached_set.add(u)
        remaining.remove(u)
    return AggregationTree(parent)


def union_find_is_tree(parents, num_sensors):
    """Independent acyclicity/spanning oracle over the parent map."""
    # ids: sensors 0..v-1, sink mapped to v
    uf = list(range(num_sensors + 1))

    def find(a):
        while uf[a] != a:
            uf[a] = uf[uf[a]]
            a = uf[a]
        return a

    for i, p in parents.items():
        a, b = find(i), find(num_sensors if p == SINK else p)
        if a == b:
            return False
        uf[a] = b
    return True


def bfs_depths(topo, tree):
    """Depth of every sensor via BFS over the tree's child lists."""
    depth = {SINK: 0}
    queue = [SINK]
    while queue:
        x = queue.pop(0)
        for c in tree.children(x):
            depth[c] = depth[x] + 1
            queue.append(c)
    return depth


def kirchhoff_count(topo):
    """Matrix-tree spanning tree count (float det, exact for small counts)."""
    n = topo.num_sensors + 1

    def idx(i):
        return topo.num_sensors if i == SINK else i

    lap = np.zeros((n, n))
    for a, b in topo.edges():
        ia, ib = idx(a), idx(b)
        lap[ia, ia] += 1
        lap[ib, ib] += 1
        lap[ia, ib] -= 1
        lap[ib, ia] -= 1
    minor = np.delete(np.delete(lap, n - 1, axis=0), n - 1, axis=1)
    if minor.size == 0:
        return 1
    return int(round(np.linalg.det(minor)))


def ring_topology(n):
    """Cycle of n nodes with the sink on the cycle (n-1 sensors)."""
    edges = [(i, i + 1) for i in range(n - 2)]
    edges += [(SINK, 0), (SINK, n - 2)]
    return from_edges(n - 1, edges)
