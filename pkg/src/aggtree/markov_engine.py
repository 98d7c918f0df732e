"""Parent-changing random walk over aggregation trees, plus the analytics
of the underlying approximation: softmax stationary distribution, gap and
perturbation bounds, and total-variation distance.

One chain owns its state and RNG; chains with different seeds can run in
parallel with nothing shared.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .topology import SINK
from .agg_tree import canonical_key, reparent
from .scheduler import _assignment_value, optimal_schedule


class LengthMismatch(Exception):
    pass


ESTIMATORS = ("exact", "approx1", "approx2")


@dataclass
class MarkovConfig:
    alpha: float = 0.2
    beta: float = 2.0
    iterations: int = 50
    estimator: str = "exact"
    seed: int = 0

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.estimator not in ESTIMATORS:
            raise ValueError(f"estimator must be one of {ESTIMATORS}")


@dataclass
class MarkovState:
    tree: object
    schedule: object
    clock: int
    rng: np.random.Generator


@dataclass
class TransitionRecord:
    step: int
    mover: object          # None on a frozen step
    old_parent: object
    new_parent: object
    phi_prev_est: float
    phi_next_est: float
    accept_prob: float
    accepted: bool
    phi_exact: int
    frozen: bool = False


@dataclass
class RunResult:
    trajectory: list
    best_tree: object
    best_phi: int
    final_state: MarkovState
    # (canonical tree key, total candidate count) per step when collected;
    # weighting occupancy by 1/rate recovers the continuous-time picture.
    state_log: list = field(default_factory=list)


def candidate_parents(state, i, topo, D):
    """Neighbors of i that could become its parent right now.

    Rule: effective waiting time W_j >= W_i (non-participants count as 0,
    the sink as D), excluding the current parent and anything in i's own
    subtree. May be empty.
    """
    w_i = state.schedule.waiting_time(i, D)
    current = state.tree.parent[i]
    sub = state.tree.subtree(i)
    out = set()
    for j in topo.neighbors(i):
        if j == current or j in sub:
            continue
        if state.schedule.waiting_time(j, D) >= w_i:
            out.add(j)
    return out


def transition_prob(phi_prev, phi_next, alpha, beta):
    """Acceptance probability exp(-a) * e^(b*next) / (e^(b*prev) + e^(b*next)).

    Computed through logaddexp so large quality values cannot overflow.
    """
    log_q = -alpha + beta * phi_next - np.logaddexp(beta * phi_prev, beta * phi_next)
    return float(math.exp(log_q))


def subtree_phi(tree, D, topo, root, budget):
    """Best quality of the subtree rooted at `root` when granted `budget` slots."""
    if budget <= 0:
        return 1 if topo.is_source(root) else 0
    nodes = []
    queue = [root]
    while queue:
        x = queue.pop()
        nodes.append(x)
        queue.extend(tree.children(x))
    vecs = {}
    for x in reversed(nodes):
        child_vecs = tuple(sorted(vecs[c] for c in tree.children(x)))
        vecs[x] = _subtree_vector(topo.is_source(x), child_vecs, D)
    if root == SINK:
        kid_vecs = tuple(sorted(vecs[c] for c in tree.children(SINK)))
        return _assignment_value(kid_vecs, min(budget, D))
    return vecs[root][min(budget, D - 1)]


def _subtree_vector(is_source, child_vecs, D):
    from .scheduler import _node_vector

    return _node_vector(is_source, child_vecs, D)


def estimate_phi(state, i, old_parent, new_parent, method, topo, D):
    """(phi_prev, phi_next) estimates for moving i from old_parent to new_parent.

    exact   full reschedule of both whole trees;
    approx1 subtree optima rooted at the two parents, before and after the
            move, each with local budget equal to that root's current
            waiting time;
    approx2 just the waiting times of i and the candidate parent.
    """
    if method == "exact":
        candidate = reparent(state.tree, i, new_parent, topo)
        return float(state.schedule.phi), float(optimal_schedule(candidate, D, topo).phi)
    if method == "approx1":
        b_old = state.schedule.waiting_time(old_parent, D)
        b_new = state.schedule.waiting_time(new_parent, D)
        phi_prev = subtree_phi(state.tree, D, topo, old_parent, b_old) + subtree_phi(
            state.tree, D, topo, new_parent, b_new
        )
        moved = reparent(state.tree, i, new_parent, topo)
        phi_next = subtree_phi(moved, D, topo, old_parent, b_old) + subtree_phi(
            moved, D, topo, new_parent, b_new
        )
        return float(phi_prev), float(phi_next)
    if method == "approx2":
        return (
            float(state.schedule.waiting_time(i, D)),
            float(state.schedule.waiting_time(new_parent, D)),
        )
    raise ValueError(f"unknown estimator {method!r}")


def step(state, config, topo, D, _cache=None):
    """One timer expiration: pick a mover, propose a parent change, accept or not.

    The expiring node is drawn with probability proportional to its
    candidate count (the exponential race with per-node rate equal to that
    count). On acceptance the move commits and the whole tree is
    rescheduled; on rejection nothing changes but the clock and RNG.
    """
    cands = {i: candidate_parents(state, i, topo, D) for i in state.tree.sensors()}
    weights = np.array([len(cands[i]) for i in sorted(cands)], dtype=float)
    total = weights.sum()
    state.clock += 1
    if total == 0:
        rec = TransitionRecord(
            step=state.clock, mover=None, old_parent=None, new_parent=None,
            phi_prev_est=float(state.schedule.phi), phi_next_est=float(state.schedule.phi),
            accept_prob=0.0, accepted=False, phi_exact=state.schedule.phi, frozen=True,
        )
        return state, rec
    ids = sorted(cands)
    mover = int(state.rng.choice(ids, p=weights / total))
    options = sorted(cands[mover])
    new_parent = options[int(state.rng.integers(len(options)))]
    old_parent = state.tree.parent[mover]
    phi_prev, phi_next = estimate_phi(state, mover, old_parent, new_parent, config.estimator, topo, D)
    q = transition_prob(phi_prev, phi_next, config.alpha, config.beta)
    accepted = bool(state.rng.random() < q)
    if accepted:
        state.tree = reparent(state.tree, mover, new_parent, topo)
        key = canonical_key(state.tree)
        if _cache is not None and key in _cache:
            state.schedule = _cache[key]
        else:
            state.schedule = optimal_schedule(state.tree, D, topo)
            if _cache is not None:
                _cache[key] = state.schedule
    rec = TransitionRecord(
        step=state.clock, mover=mover, old_parent=old_parent, new_parent=new_parent,
        phi_prev_est=phi_prev, phi_next_est=phi_next,
        accept_prob=q, accepted=accepted, phi_exact=state.schedule.phi,
    )
    return state, rec


def run(config, topo, D, initial, collect_states=False):
    """Execute exactly config.iterations timer expirations from the initial tree.

    Deterministic given config.seed. Tracks the best exact quality seen
    anywhere along the trajectory, since the chain is free to leave good
    states.
    """
    sched = optimal_schedule(initial, D, topo)
    state = MarkovState(
        tree=initial, schedule=sched, clock=0, rng=np.random.default_rng(config.seed)
    )
    cache = {canonical_key(initial): sched}
    best_tree, best_phi = state.tree, state.schedule.phi
    trajectory = []
    state_log = []
    for _ in range(config.iterations):
        if collect_states:
            rate = sum(
                len(candidate_parents(state, i, topo, D)) for i in state.tree.sensors()
            )
            state_log.append((canonical_key(state.tree), rate))
        state, rec = step(state, config, topo, D, _cache=cache)
        trajectory.append(rec)
        if rec.phi_exact > best_phi:
            best_phi = rec.phi_exact
            best_tree = state.tree
    return RunResult(
        trajectory=trajectory, best_tree=best_tree, best_phi=best_phi,
        final_state=state, state_log=state_log,
    )


def write_trajectory(path, trajectory):
    """Trajectory CSV, one row per timer expiration."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow([
            "step", "mover", "old_parent", "new_parent",
            "phi_prev_est", "phi_next_est", "accept_prob", "accepted", "phi_exact",
        ])
        for r in trajectory:
            w.writerow([
                r.step,
                "" if r.mover is None else r.mover,
                "" if r.old_parent is None else r.old_parent,
                "" if r.new_parent is None else r.new_parent,
                f"{r.phi_prev_est:.6g}",
                f"{r.phi_next_est:.6g}",
                f"{r.accept_prob:.12g}",
                int(r.accepted),
                r.phi_exact,
            ])


def stationary_distribution(phis, beta):
    """Softmax with weight beta over the per-tree qualities."""
    if beta <= 0:
        raise ValueError("beta must be > 0")
    x = beta * np.asarray(phis, dtype=float)
    x = x - x.max()
    e = np.exp(x)
    return e / e.sum()


def approximation_gap(num_states, beta):
    """Worst-case gap (1/beta) * ln(#states) between max quality and the relaxation."""
    if num_states < 1:
        raise ValueError("num_states must be >= 1")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    return math.log(num_states) / beta


def log_sum_exp_value(phis, beta):
    """Relaxed optimal value (1/beta) * ln(sum exp(beta*phi)), overflow-safe.

    Satisfies max(phis) <= value <= max(phis) + approximation_gap.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    x = beta * np.asarray(phis, dtype=float)
    m = x.max()
    return float((m + np.log(np.exp(x - m).sum())) / beta)


def perturbation_bound(phi_max, beta, delta_max):
    """Optimality-gap bound 2 * phi_max * (1 - exp(-2*beta*delta_max)) under
    estimation error bounded by delta_max."""
    if delta_max < 0:
        raise ValueError("delta_max must be >= 0")
    return 2.0 * phi_max * (1.0 - math.exp(-2.0 * beta * delta_max))


def tv_distance(p, q):
    """Total-variation distance: half the L1 distance between distributions."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise LengthMismatch(f"length {p.shape} vs {q.shape}")
    return float(0.5 * np.abs(p - q).sum())
