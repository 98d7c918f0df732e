"""Optimal waiting-time assignment on a fixed aggregation tree.

A node that waits w slots may grant its participating children distinct
slots in {0..w-1}; the sink waits exactly D. The maximum number of sources
whose data reaches the sink (the tree's quality) is computed bottom-up:
X[i][w] is the best source count in the subtree of i when i is granted
budget w, and combining children is an exact maximum-weight assignment of
children to slots. Distinct-slot injective assignment is equivalent to the
per-parent capacity constraint (child count <= W_i - min child slot) plus
one-hop interference, so per-node exact assignment composed bottom-up is
globally optimal on a tree.
"""

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import linear_sum_assignment

from .topology import SINK
from .agg_tree import ancestors


class InvalidDeadline(Exception):
    pass


class TooLarge(Exception):
    pass


@dataclass(frozen=True)
class Schedule:
    """Waiting times W (participants only), participation flags n, and quality phi.

    The sink's waiting time is the deadline and is not stored. ``sources``
    records which sensors carry data, so a schedule can be re-scored
    without the topology at hand.
    """

    W: dict
    n: dict
    phi: int
    sources: frozenset = field(default_factory=frozenset)

    def waiting_time(self, i, deadline):
        """Effective waiting time: participants keep W, non-participants 0, sink D."""
        if i == SINK:
            return deadline
        return self.W.get(i, 0)


def _bfs_order(tree):
    order = []
    queue = [SINK]
    while queue:
        nxt = []
        for x in queue:
            order.extend(tree.children(x))
            nxt.extend(tree.children(x))
        queue = nxt
    return order


def _assignment_rows(child_vecs, w):
    # Children whose subtree yields nothing even at the highest slot are dead
    # rows (values are nondecreasing in the slot); duplicates beyond w copies
    # can never all be assigned.
    rows = []
    counts = {}
    for vec in child_vecs:
        if vec[w - 1] <= 0:
            continue
        c = counts.get(vec, 0)
        if c < w:
            counts[vec] = c + 1
            rows.append(vec[:w])
    return rows


def _assignment_value(child_vecs, w):
    """Max total over injective assignments of children to slots {0..w-1}."""
    if w <= 0 or not child_vecs:
        return 0
    rows = _assignment_rows(child_vecs, w)
    if not rows:
        return 0
    m = np.array(rows, dtype=float)
    r, c = linear_sum_assignment(m, maximize=True)
    return int(round(m[r, c].sum()))


@lru_cache(maxsize=262144)
def _node_vector(is_source, child_vecs, D):
    """X[i][w] for w in 0..D-1, given the sorted child value vectors."""
    base = 1 if is_source else 0
    if not child_vecs:
        return (base,) * D
    return tuple(base + _assignment_value(child_vecs, w) for w in range(D))


def subtree_value_vectors(tree, D, topo):
    """Per-node value vectors X[i][0..D-1], children combined bottom-up."""
    vecs = {}
    for i in reversed(_bfs_order(tree)):
        child_vecs = tuple(sorted(vecs[c] for c in tree.children(i)))
        vecs[i] = _node_vector(topo.is_source(i), child_vecs, D)
    return vecs


def optimal_phi(tree, D, topo):
    """Maximum quality achievable on this fixed tree (value only, no unwind)."""
    if D <= 0:
        raise InvalidDeadline(f"deadline must be >= 1, got {D}")
    vecs = subtree_value_vectors(tree, D, topo)
    sink_vecs = tuple(sorted(vecs[c] for c in tree.children(SINK)))
    return _assignment_value(sink_vecs, D)


def _slot_matrix_value(rows, slots):
    if not rows or not slots:
        return 0
    m = np.array([[vec[t] for t in slots] for vec in rows], dtype=float)
    r, c = linear_sum_assignment(m, maximize=True)
    return int(round(m[r, c].sum()))


def _canonical_assignment(child_ids, vecs, w):
    """Optimal child->slot map; ties prefer lower slots for smaller child ids.

    Children whose assigned contribution would be zero stay unassigned
    (pure relays with nothing below them cannot raise the quality).
    """
    slots = list(range(w))
    pending = sorted(child_ids)
    target = _slot_matrix_value([vecs[c] for c in pending], slots)
    chosen = {}
    for c in sorted(child_ids):
        pending.remove(c)
        rest_rows = [vecs[p] for p in pending]
        pick = None
        for t in slots:
            if vecs[c][t] <= 0:
                continue
            if vecs[c][t] + _slot_matrix_value(rest_rows, [s for s in slots if s != t]) == target:
                pick = t
                break
        if pick is None:
            continue
        chosen[c] = pick
        slots.remove(pick)
        target -= vecs[c][pick]
    return chosen


def optimal_schedule(tree, D, topo):
    """Feasible schedule maximizing the quality on this fixed tree.

    Deterministic: among equally optimal assignments, lower slots go to
    lexicographically smaller child ids.
    """
    if D <= 0:
        raise InvalidDeadline(f"deadline must be >= 1, got {D}")
    vecs = subtree_value_vectors(tree, D, topo)
    W = {}
    n = {i: 0 for i in tree.sensors()}
    stack = [(SINK, D)]
    while stack:
        node, budget = stack.pop()
        for c, t in _canonical_assignment(tree.children(node), vecs, budget).items():
            W[c] = t
            n[c] = 1
            stack.append((c, t))
    sources = frozenset(i for i in tree.sensors() if topo.is_source(i))
    phi = sum(1 for i in W if i in sources)
    return Schedule(W=W, n=n, phi=phi, sources=sources)


def brute_force_schedule(tree, D, topo):
    """Exhaustive exact optimum, used as an independent oracle.

    At each node every injective assignment of every child subset to slots
    below the budget is enumerated. Guarded to |V| <= 12 and D <= 5.
    """
    if D <= 0:
        raise InvalidDeadline(f"deadline must be >= 1, got {D}")
    if topo.num_sensors > 12 or D > 5:
        raise TooLarge("brute force guarded to <= 12 nodes and D <= 5")

    best_val = {}     # (node, budget) -> value
    best_assign = {}  # (node, budget) -> {child: slot}

    def enumerate_node(i, w):
        kids = tree.children(i)
        base = 1 if topo.is_source(i) else 0
        top, top_assign = base, {}
        for m in range(1, min(len(kids), w) + 1):
            for subset in itertools.combinations(kids, m):
                for perm in itertools.permutations(range(w), m):
                    val = base + sum(best_val[(c, t)] for c, t in zip(subset, perm))
                    if val > top:
                        top, top_assign = val, dict(zip(subset, perm))
        return top, top_assign

    for i in reversed(_bfs_order(tree)):
        for w in range(D):
            best_val[(i, w)], best_assign[(i, w)] = enumerate_node(i, w)

    _, root_assign = enumerate_node(SINK, D)
    best_assign[(SINK, D)] = root_assign

    W = {}
    n = {i: 0 for i in tree.sensors()}
    stack = [(SINK, D)]
    while stack:
        node, budget = stack.pop()
        for c, t in best_assign[(node, budget)].items():
            if best_val[(c, t)] <= 0:
                continue
            W[c] = t
            n[c] = 1
            stack.append((c, t))
    sources = frozenset(i for i in tree.sensors() if topo.is_source(i))
    phi = sum(1 for i in W if i in sources)
    return Schedule(W=W, n=n, phi=phi, sources=sources)


def validate_schedule(tree, D, sched):
    """Constraint-by-constraint check; returns violations as (kind, detail) tuples."""
    out = []
    for i in tree.sensors():
        flagged = sched.n.get(i, 0) == 1
        if flagged != (i in sched.W):
            out.append(("flag-mismatch", i))
    for i, w in sched.W.items():
        if not 0 <= w <= D - 1:
            out.append(("range", i))
    for i in sched.W:
        p = tree.parent[i]
        w_parent = D if p == SINK else sched.W.get(p)
        if p != SINK and p not in sched.W:
            out.append(("closure", i))
        elif sched.W[i] >= w_parent:
            out.append(("order", i))
    parents = {tree.parent[i] for i in sched.W}
    for p in sorted(parents):
        kids = [c for c in tree.children(p) if c in sched.W]
        slots = [sched.W[c] for c in kids]
        if len(set(slots)) != len(slots):
            out.append(("interference", p))
        w_parent = D if p == SINK else sched.W.get(p)
        if w_parent is not None and kids and len(kids) > w_parent - min(slots):
            out.append(("capacity", p))
    recount = sum(
        1
        for i in tree.sensors()
        if i in sched.sources and all(sched.n.get(j, 0) == 1 for j in ancestors(tree, i))
    )
    if recount != sched.phi:
        out.append(("phi-mismatch", recount))
    return out


def reduce_deadline(sched, D, D_new):
    """Re-schedule for a shorter deadline by shifting waiting times down.

    Participants with W >= D - D_new keep participating at W - (D - D_new);
    all others drop out. Closure survives because a participant's waiting
    time is strictly below its parent's.
    """
    if not 1 <= D_new <= D:
        raise InvalidDeadline(f"need 1 <= D_new <= D, got D_new={D_new}, D={D}")
    shift = D - D_new
    W = {i: w - shift for i, w in sched.W.items() if w >= shift}
    n = {i: (1 if i in W else 0) for i in sched.n}
    phi = sum(1 for i in W if i in sched.sources)
    return Schedule(W=W, n=n, phi=phi, sources=sched.sources)


def dump_schedule(sched):
    """Text dump: `<id> <W|-> <n>` per sensor, then a PHI line."""
    lines = []
    for i in sorted(sched.n):
        w = sched.W.get(i, "-")
        lines.append(f"{i} {w} {sched.n[i]}")
    lines.append(f"PHI {sched.phi}")
    return "\n".join(lines) + "\n"
