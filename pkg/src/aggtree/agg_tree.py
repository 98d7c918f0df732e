"""Spanning aggregation trees rooted at the sink, stored as parent maps.

Trees are immutable values: every mutation-like operation returns a fresh
tree, so a rejected Markov move restores the previous state exactly.
"""

from .topology import SINK


class TreeError(Exception):
    """Base class for tree construction/validation failures."""


class MissingNode(TreeError):
    pass


class CycleDetected(TreeError):
    pass


class NonTopologyEdge(TreeError):
    pass


class WouldCreateCycle(TreeError):
    pass


class AggregationTree:
    """Spanning tree over a topology, parent map keyed by sensor id.

    The sink is the implicit root and has no entry. Use build_from_parents
    to construct validated instances.
    """

    __slots__ = ("parent", "_children", "_key")

    def __init__(self, parent):
        self.parent = dict(parent)
        children = {SINK: []}
        for i in self.parent:
            children.setdefault(i, [])
        for i, p in self.parent.items():
            children.setdefault(p, []).append(i)
        self._children = {k: tuple(sorted(v)) for k, v in children.items()}
        self._key = tuple(sorted(self.parent.items()))

    def children(self, i):
        return self._children.get(i, ())

    def sensors(self):
        return self.parent.keys()

    def depth(self, i):
        d = 0
        while i != SINK:
            i = self.parent[i]
            d += 1
        return d

    def subtree(self, i):
        """All nodes in the subtree rooted at i, including i."""
        out = [i]
        stack = [i]
        while stack:
            x = stack.pop()
            for c in self.children(x):
                out.append(c)
                stack.append(c)
        return set(out)

    def __eq__(self, other):
        return isinstance(other, AggregationTree) and self.parent == other.parent

    def __hash__(self):
        return hash(self._key)


def build_from_parents(parents, topo):
    """Validate a parent map against the topology and return the tree.

    Raises MissingNode if any sensor id lacks an entry (or an unknown id
    appears), NonTopologyEdge if a (child, parent) pair is not an edge of
    the topology, and CycleDetected if some sensor cannot reach the sink.
    """
    sensors = set(range(topo.num_sensors))
    keys = set(parents)
    if keys != sensors:
        missing = sorted(sensors - keys) + sorted(keys - sensors)
        raise MissingNode(f"parent map does not cover sensors exactly, offending ids {missing}")
    for i, p in parents.items():
        if p != SINK and p not in sensors:
            raise MissingNode(f"node {i} has unknown parent {p}")
        if p == i or not topo.has_edge(i, p):
            raise NonTopologyEdge(f"edge ({i}, {p}) is not in the topology")
    # Walk each parent chain; a chain that revisits a node never reaches the sink.
    state = {}  # 0 = in progress, 1 = reaches sink
    for start in parents:
        path = []
        i = start
        while i != SINK and state.get(i) is None:
            state[i] = 0
            path.append(i)
            i = parents[i]
        if i != SINK and state[i] == 0:
            raise CycleDetected(f"cycle through node {i}")
        for x in path:
            state[x] = 1
    return AggregationTree(parents)


def ancestors(tree, i):
    """Node i followed by its predecessors up to (excluding) the sink."""
    out = []
    while i != SINK:
        out.append(i)
        i = tree.parent[i]
    return out


def reparent(tree, i, new_parent, topo):
    """New tree equal to `tree` except parent(i) = new_parent.

    Raises NonTopologyEdge if (i, new_parent) is not an edge, and
    WouldCreateCycle if new_parent lies in the subtree of i.
    """
    if new_parent == i or not topo.has_edge(i, new_parent):
        raise NonTopologyEdge(f"edge ({i}, {new_parent}) is not in the topology")
    if new_parent != SINK and new_parent in tree.subtree(i):
        raise WouldCreateCycle(f"{new_parent} is a descendant of {i}")
    parents = dict(tree.parent)
    parents[i] = new_parent
    return AggregationTree(parents)


def canonical_key(tree):
    """Opaque comparable key; equal trees map to equal keys."""
    return tree._key


def save_tree(tree, path):
    """Text format: one `<child> <parent>` line per sensor, sink written as S."""
    with open(path, "w") as f:
        for i in sorted(tree.sensors()):
            p = tree.parent[i]
            f.write(f"{i} {'S' if p == SINK else p}\n")


def load_tree(path, topo):
    parents = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            child, parent = line.split()
            parents[int(child)] = SINK if parent == "S" else int(parent)
    return build_from_parents(parents, topo)
