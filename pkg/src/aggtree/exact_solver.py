"""Exhaustive optimal baseline: enumerate every spanning tree rooted at the
sink and keep the one whose optimal schedule participates the most sources.

Enumeration grows the tree outward from the sink one frontier edge at a
time, branching on include/forbid for the first frontier edge in a fixed
order. The two branches partition the remaining trees, so each spanning
tree is produced exactly once and nothing needs to be stored.
"""

from collections import deque
from dataclasses import dataclass

from .topology import SINK
from .agg_tree import AggregationTree, canonical_key
from .scheduler import optimal_phi, optimal_schedule


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_trees: int = 5_000_000
    max_nodes: int = 15

    def __post_init__(self):
        if self.max_trees < 1 or self.max_nodes < 1:
            raise ValueError("budget caps must be positive")


def _completable(topo, attached, forbidden):
    """Can every unattached sensor still be reached without forbidden edges?"""
    seen = set(attached)
    queue = deque(attached)
    while queue:
        x = queue.popleft()
        for y in topo.neighbors(x):
            if y in seen:
                continue
            e = (min(x, y), max(x, y))
            if e in forbidden:
                continue
            seen.add(y)
            queue.append(y)
    return len(seen) == topo.num_sensors + 1


def enumerate_spanning_trees(topo, budget=EnumerationBudget()):
    """Yield each sink-rooted spanning tree exactly once.

    Raises BudgetExceeded when max_nodes is violated up front, or when the
    stream would exceed max_trees (everything up to the cap has already
    been yielded by then).
    """
    if topo.num_sensors > budget.max_nodes:
        raise BudgetExceeded(
            f"{topo.num_sensors} sensors exceeds the {budget.max_nodes}-node cap"
        )
    count = 0
    parent = {}
    attached = {SINK}
    forbidden = set()

    def frontier_edge():
        # First allowed edge from an attached to an unattached node, in id order.
        best = None
        for x in sorted(attached):
            for y in topo.neighbors(x):
                if y in attached:
                    continue
                e = (min(x, y), max(x, y))
                if e in forbidden:
                    continue
                cand = (y, x)
                if best is None or cand < best:
                    best = cand
        return best

    def grow():
        nonlocal count
        if len(parent) == topo.num_sensors:
            count += 1
            if count > budget.max_trees:
                raise BudgetExceeded(f"more than {budget.max_trees} spanning trees")
            yield AggregationTree(parent)
            return
        pick = frontier_edge()
        if pick is None:
            return
        child, par = pick
        edge = (min(child, par), max(child, par))
        parent[child] = par
        attached.add(child)
        yield from grow()
        del parent[child]
        attached.remove(child)
        forbidden.add(edge)
        if _completable(topo, attached, forbidden):
            yield from grow()
        forbidden.remove(edge)

    yield from grow()


def z_optimal(topo, D, budget=EnumerationBudget()):
    """Exhaustive-search optimum over all spanning trees: (best tree, phi).

    Ties are broken by the smallest canonical key, so the result is
    deterministic regardless of enumeration internals.
    """
    best = None
    for tree in enumerate_spanning_trees(topo, budget):
        phi = optimal_phi(tree, D, topo)
        key = canonical_key(tree)
        if best is None or (-phi, key) < (-best[1], best[2]):
            best = (tree, phi, key)
    if best is None:
        raise BudgetExceeded("no spanning tree enumerated (disconnected topology?)")
    tree, phi, _ = best
    return tree, phi


def z_optimal_schedule(topo, D, budget=EnumerationBudget()):
    """Best tree together with its full schedule."""
    tree, _ = z_optimal(topo, D, budget)
    return tree, optimal_schedule(tree, D, topo)
