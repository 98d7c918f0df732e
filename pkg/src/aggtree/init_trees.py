"""Initial aggregation trees: the fast power-ranked heuristic, the greedy
incremental baseline, and synthetic chain/BFS families."""

import math
from collections import deque

from .topology import SINK
from .agg_tree import AggregationTree, build_from_parents


class Disconnected(Exception):
    pass


class NotConstructible(Exception):
    pass


def _power(topo, i, done):
    """Number of i's sensor neighbors not yet assigned to a parent."""
    return sum(1 for j in topo.neighbors(i) if j != SINK and j not in done)


def fast_init_tree(topo, D):
    """Power-ranked recursive construction approximating the ideal tree.

    Starting at the sink with budget D, a parent adopts its top
    min(#unassigned neighbors, budget) unassigned neighbors by descending
    power (ties by ascending id); the i-th adopted child then recurses with
    budget D - i. Children are all adopted before any of them recurses, so
    on a complete graph the result is an ideal tree. Nodes left unassigned
    attach, in BFS order from the built tree, to the done neighbor with the
    fewest children.
    """
    if D < 1:
        raise ValueError(f"deadline must be >= 1, got {D}")
    parent = {}
    done = {SINK}

    def extend(p, budget):
        curr = [j for j in topo.neighbors(p) if j != SINK and j not in done]
        curr.sort(key=lambda j: (-_power(topo, j, done), j))
        adopted = curr[: min(len(curr), budget)]
        for c in adopted:
            parent[c] = p
            done.add(c)
        for rank, c in enumerate(adopted, start=1):
            if budget - rank > 0:
                extend(c, budget - rank)

    extend(SINK, D)

    # Leftover attachment: sweep outward from the built tree so nodes that
    # just attached can immediately adopt their own neighbors.
    child_count = {i: 0 for i in range(topo.num_sensors)}
    child_count[SINK] = 0
    for c, p in parent.items():
        child_count[p] += 1
    queue = deque(sorted(done, key=lambda x: (x != SINK, x)))
    visited = set(done)
    while queue:
        x = queue.popleft()
        for y in sorted(topo.neighbors(x)):
            if y == SINK or y in visited:
                continue
            candidates = [z for z in topo.neighbors(y) if z in done]
            best = min(candidates, key=lambda z: (child_count[z], z))
            parent[y] = best
            child_count[best] += 1
            done.add(y)
            visited.add(y)
            queue.append(y)
    if len(parent) != topo.num_sensors:
        missing = sorted(set(range(topo.num_sensors)) - set(parent))
        raise Disconnected(f"nodes {missing} cannot reach the sink")
    return build_from_parents(parent, topo)


def git_tree(topo):
    """Greedy incremental tree: repeatedly attach the unattached sensor whose
    edge to the tree is shortest (ties by candidate id, then tree-node id)."""
    parent = {}
    in_tree = {SINK}
    remaining = set(range(topo.num_sensors))
    while remaining:
        best = None
        for u in sorted(remaining):
            pu = topo.position_of(u)
            for x in topo.neighbors(u):
                if x not in in_tree:
                    continue
                px = topo.position_of(x)
                d = math.hypot(pu[0] - px[0], pu[1] - px[1])
                key = (d, u, x)
                if best is None or key < best:
                    best = key
        if best is None:
            raise Disconnected(f"nodes {sorted(remaining)} cannot reach the sink")
        _, u, x = best
        parent[u] = x
        in_tree.add(u)
        remaining.remove(u)
    return build_from_parents(parent, topo)


def _hamiltonian_chain(topo):
    """Backtracking search for a path from the sink covering all sensors."""
    v = topo.num_sensors
    path = [SINK]
    used = {SINK}

    def step():
        if len(path) == v + 1:
            return True
        for j in sorted(topo.neighbors(path[-1])):
            if j == SINK or j in used:
                continue
            path.append(j)
            used.add(j)
            if step():
                return True
            path.pop()
            used.remove(j)
        return False

    if not step():
        raise NotConstructible("no Hamiltonian path from the sink exists")
    return {path[k]: path[k - 1] for k in range(1, len(path))}


def synthetic_tree(topo, kind):
    """Synthetic tree families: `chain` (worst case) and `bfs` (shortest paths)."""
    if kind == "chain":
        return build_from_parents(_hamiltonian_chain(topo), topo)
    if kind == "bfs":
        parent = {}
        seen = {SINK}
        queue = deque([SINK])
        while queue:
            x = queue.popleft()
            for y in sorted(topo.neighbors(x)):
                if y == SINK or y in seen:
                    continue
                parent[y] = x
                seen.add(y)
                queue.append(y)
        if len(parent) != topo.num_sensors:
            raise Disconnected("topology is not connected")
        return build_from_parents(parent, topo)
    raise ValueError(f"unknown tree kind {kind!r}")
