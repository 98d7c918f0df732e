"""WSN communication graphs: random geometric deployments and synthetic families.

Nodes are sensors 0..V-1 plus one sink with the reserved id ``SINK``.
A topology is immutable after construction and safe to share between
parallel experiment runs.
"""

from collections import deque

import numpy as np
from scipy.spatial import cKDTree

# Reserved node id for the sink; distinct from every sensor id.
SINK = -1


class Topology:
    """Undirected communication graph over sensors 0..V-1 and the sink.

    Adjacency is stored as sorted neighbor tuples per node (sink keyed by
    ``SINK``). ``source_flags[i]`` marks sensor i as a data source; the sink
    carries no flag.
    """

    def __init__(self, positions, sink_pos, comm_range, source_flags, edges):
        self.num_sensors = len(positions)
        self.positions = np.asarray(positions, dtype=float).reshape(self.num_sensors, 2)
        self.sink_pos = (float(sink_pos[0]), float(sink_pos[1]))
        self.comm_range = float(comm_range)
        self.source_flags = np.asarray(source_flags, dtype=bool).reshape(self.num_sensors)
        nbrs = {i: set() for i in range(self.num_sensors)}
        nbrs[SINK] = set()
        for a, b in edges:
            if a == b:
                continue
            nbrs[a].add(b)
            nbrs[b].add(a)
        self._neighbors = {k: tuple(sorted(v)) for k, v in nbrs.items()}

    @property
    def sensors(self):
        return range(self.num_sensors)

    @property
    def num_sources(self):
        return int(self.source_flags.sum())

    def neighbors(self, i):
        """Sorted neighbor ids of node i (sink included, keyed by SINK)."""
        return self._neighbors[i]

    def has_edge(self, i, j):
        return j in self._neighbors.get(i, ())

    def edges(self):
        """Every undirected edge once, as (min, max) pairs sorted."""
        out = []
        for i, nb in self._neighbors.items():
            for j in nb:
                if i < j:
                    out.append((i, j))
        return sorted(out)

    def position_of(self, i):
        return self.sink_pos if i == SINK else tuple(self.positions[i])

    def is_source(self, i):
        return i != SINK and bool(self.source_flags[i])


def generate_rgg(v, field_w, field_h, comm_range, sink_pos, source_fraction, seed):
    """Random geometric deployment: v sensors uniform over the field.

    Nodes (sink included) are adjacent iff their Euclidean distance is
    <= comm_range. Exactly round(source_fraction*v) sensors are flagged as
    sources, chosen uniformly. Deterministic given seed. Disconnected
    outputs are legal; callers regenerate if they need connectivity.
    """
    if v < 0:
        raise ValueError("v must be >= 0")
    if comm_range <= 0:
        raise ValueError("comm_range must be > 0")
    if not 0.0 <= source_fraction <= 1.0:
        raise ValueError("source_fraction must be in [0, 1]")
    rng = np.random.default_rng(seed)
    positions = rng.uniform((0.0, 0.0), (field_w, field_h), size=(v, 2))
    n_sources = int(round(source_fraction * v))
    flags = np.zeros(v, dtype=bool)
    if n_sources > 0:
        flags[rng.choice(v, size=n_sources, replace=False)] = True
    pts = np.vstack([positions, [sink_pos]]) if v else np.array([sink_pos], dtype=float)
    tree = cKDTree(pts)
    edges = []
    for a, b in tree.query_pairs(comm_range):
        ia = SINK if a == v else a
        ib = SINK if b == v else b
        edges.append((ia, ib))
    return Topology(positions, sink_pos, comm_range, flags, edges)


def make_complete(v):
    """Complete graph on v sensors plus the sink; every sensor is a source.

    Positions are synthetic (sensors on a unit circle around the sink) and
    chosen so the distance rule reproduces completeness on reload.
    """
    if v < 1:
        raise ValueError("v must be >= 1")
    theta = 2.0 * np.pi * np.arange(v) / v
    positions = np.column_stack([np.cos(theta), np.sin(theta)])
    edges = [(i, j) for i in range(v) for j in range(i + 1, v)]
    edges += [(i, SINK) for i in range(v)]
    return Topology(positions, (0.0, 0.0), 3.0, np.ones(v, dtype=bool), edges)


def from_edges(v, edges, source_flags=None, positions=None, comm_range=1.0, sink_pos=(0.0, 0.0)):
    """Topology with an explicit edge set (fixtures and synthetic cases).

    The distance rule does not apply; adjacency is exactly ``edges``.
    """
    if source_flags is None:
        source_flags = np.ones(v, dtype=bool)
    if positions is None:
        positions = np.zeros((v, 2))
    return Topology(positions, sink_pos, comm_range, source_flags, edges)


def is_connected(topo):
    """True iff every sensor is reachable from the sink."""
    seen = {SINK}
    queue = deque([SINK])
    while queue:
        x = queue.popleft()
        for y in topo.neighbors(x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == topo.num_sensors + 1


def save_topology(topo, path):
    """Write the text format: header line, then one `<id> <x> <y> <F>` per sensor."""
    with open(path, "w") as f:
        f.write(f"V {topo.num_sensors} RANGE {topo.comm_range!r} "
                f"SINK {topo.sink_pos[0]!r} {topo.sink_pos[1]!r}\n")
        for i in topo.sensors:
            x, y = topo.positions[i]
            f.write(f"{i} {float(x)!r} {float(y)!r} {1 if topo.source_flags[i] else 0}\n")


def load_topology(path):
    """Read the text format; adjacency is recomputed from positions."""
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 7 or header[0] != "V" or header[2] != "RANGE" or header[4] != "SINK":
            raise ValueError(f"malformed topology header in {path}")
        v = int(header[1])
        comm_range = float(header[3])
        sink_pos = (float(header[5]), float(header[6]))
        positions = np.zeros((v, 2))
        flags = np.zeros(v, dtype=bool)
        for _ in range(v):
            idx, x, y, flag = f.readline().split()
            positions[int(idx)] = (float(x), float(y))
            flags[int(idx)] = flag == "1"
    pts = np.vstack([positions, [sink_pos]]) if v else np.array([sink_pos], dtype=float)
    tree = cKDTree(pts)
    edges = []
    for a, b in tree.query_pairs(comm_range):
        edges.append((SINK if a == v else a, SINK if b == v else b))
    return Topology(positions, sink_pos, comm_range, flags, edges)
