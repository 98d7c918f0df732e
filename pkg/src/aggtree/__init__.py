"""Deadline-constrained data-aggregation trees for wireless sensor networks.

Submodules
----------
topology       random geometric and synthetic communication graphs
agg_tree       sink-rooted spanning trees as immutable parent maps
scheduler      optimal waiting-time assignment on a fixed tree
init_trees     FastInitTree, greedy incremental and synthetic initial trees
markov_engine  parent-changing random walk and approximation analytics
exact_solver   spanning-tree enumeration and the exhaustive optimum
experiment     seeded scenario runner with CSV output
"""

from .topology import SINK, Topology, generate_rgg, is_connected, make_complete
from .agg_tree import (
    AggregationTree,
    ancestors,
    build_from_parents,
    canonical_key,
    reparent,
)
from .scheduler import (
    Schedule,
    brute_force_schedule,
    optimal_phi,
    optimal_schedule,
    reduce_deadline,
    validate_schedule,
)
from .init_trees import fast_init_tree, git_tree, synthetic_tree
from .markov_engine import (
    MarkovConfig,
    approximation_gap,
    candidate_parents,
    estimate_phi,
    log_sum_exp_value,
    perturbation_bound,
    run,
    stationary_distribution,
    step,
    transition_prob,
    tv_distance,
)
from .exact_solver import EnumerationBudget, enumerate_spanning_trees, z_optimal
from .experiment import ScenarioConfig, run_scenario, summarize

__version__ = "0.1.0"
