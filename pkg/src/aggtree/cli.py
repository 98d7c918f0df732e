"""Command line entry points: `aggtree run|schedule|init|exact`."""

import argparse
import os
import sys

from . import topology as topo_mod
from .agg_tree import load_tree, save_tree
from .exact_solver import EnumerationBudget, z_optimal_schedule
from .experiment import parse_config, run_experiment
from .init_trees import fast_init_tree, git_tree, synthetic_tree
from .scheduler import dump_schedule, optimal_schedule


def _cmd_run(args):
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    configs = parse_config(args.config, overrides)
    os.makedirs(args.out, exist_ok=True)
    records, rows = run_experiment(
        configs, args.out, timing=args.timing, trajectories=args.trajectories
    )
    print(f"wrote {len(records)} records to {args.out}/results.csv "
          f"and {len(rows)} summary rows to {args.out}/summary.csv")


def _cmd_schedule(args):
    topo = topo_mod.load_topology(args.topology)
    tree = load_tree(args.tree, topo)
    sched = optimal_schedule(tree, args.deadline, topo)
    sys.stdout.write(dump_schedule(sched))


def _cmd_init(args):
    topo = topo_mod.load_topology(args.topology)
    if args.algo == "fast":
        tree = fast_init_tree(topo, args.deadline)
    elif args.algo == "git":
        tree = git_tree(topo)
    else:
        tree = synthetic_tree(topo, args.algo)
    save_tree(tree, args.out)
    sched = optimal_schedule(tree, args.deadline, topo)
    print(f"wrote {args.out}; optimal phi at D={args.deadline} is {sched.phi}")


def _cmd_exact(args):
    topo = topo_mod.load_topology(args.topology)
    budget = EnumerationBudget(max_trees=args.max_trees, max_nodes=args.max_nodes)
    tree, sched = z_optimal_schedule(topo, args.deadline, budget)
    save_tree(tree, args.out)
    print(f"wrote {args.out}; optimal phi at D={args.deadline} is {sched.phi}")


def main(argv=None):
    ap = argparse.ArgumentParser(prog="aggtree",
                                 description="Deadline-constrained aggregation trees")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run experiment scenarios from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the base seed")
    p.add_argument("--out", default="results")
    p.add_argument("--timing", action="store_true",
                   help="write wall-clock ms (breaks byte-reproducibility)")
    p.add_argument("--trajectories", action="store_true",
                   help="write per-run Markov trajectory CSVs")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("schedule", help="optimal schedule for a tree at a deadline")
    p.add_argument("--tree", required=True)
    p.add_argument("--topology", required=True)
    p.add_argument("--deadline", type=int, required=True)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("init", help="construct an initial tree")
    p.add_argument("--algo", choices=["fast", "git", "chain", "bfs"], required=True)
    p.add_argument("--topology", required=True)
    p.add_argument("--deadline", type=int, default=5)
    p.add_argument("--out", default="tree.txt")
    p.set_defaults(func=_cmd_init)

    p = sub.add_parser("exact", help="exhaustive optimal tree search")
    p.add_argument("--topology", required=True)
    p.add_argument("--deadline", type=int, required=True)
    p.add_argument("--out", default="best_tree.txt")
    p.add_argument("--max-trees", type=int, default=5_000_000)
    p.add_argument("--max-nodes", type=int, default=15)
    p.set_defaults(func=_cmd_exact)

    args = ap.parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
