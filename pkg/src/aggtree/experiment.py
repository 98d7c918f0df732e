"""Batch scenario runner: seeded topology/deadline grids, per-algorithm
quality records, Student-t summaries, CSV output.

A scenario draws one deadline per (topology, run) shared by every
algorithm in that run, so per-run comparisons are paired. All randomness
derives from the scenario's base seed; a repeated run produces
byte-identical results.csv (wall-clock timings are only written when
explicitly enabled, precisely to keep the default output reproducible).
"""

import configparser
import csv
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import topology as topo_mod
from .exact_solver import EnumerationBudget, z_optimal
from .init_trees import fast_init_tree, git_tree
from .markov_engine import MarkovConfig, run, write_trajectory
from .scheduler import optimal_phi


class ConfigInvalid(Exception):
    pass


class EmptyGroup(Exception):
    pass


ALGORITHMS = (
    "z_optimal", "approx1", "approx2", "approx1h", "approx2h", "fastinit", "baseline",
)


@dataclass
class ScenarioConfig:
    name: str = "scenario"
    field_side: float = 300.0
    node_counts: tuple = (100,)
    comm_range: float = 75.0
    sink_pos: tuple = (150.0, 300.0)
    source_fraction: float = 0.8
    deadline: tuple = ("interval", 10, 20)   # or ("fixed", D)
    alpha: float = 0.2
    beta: float = 2.0
    runs: int = 50
    iterations: int = 50
    algorithms: tuple = ("approx1", "approx2", "approx1h", "approx2h", "fastinit", "baseline")
    base_seed: int = 1
    x_axis: str = "size"                     # size | deadline | beta
    exact_budget: EnumerationBudget = field(default_factory=EnumerationBudget)

    def __post_init__(self):
        if self.runs < 1:
            raise ConfigInvalid("runs must be >= 1")
        if self.deadline[0] == "fixed":
            if self.deadline[1] < 1:
                raise ConfigInvalid("deadline must be >= 1")
        elif self.deadline[0] == "interval":
            lo, hi = self.deadline[1], self.deadline[2]
            if lo < 1 or hi < lo:
                raise ConfigInvalid(f"bad deadline interval [{lo}, {hi}]")
        else:
            raise ConfigInvalid(f"unknown deadline spec {self.deadline!r}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ConfigInvalid(f"unknown algorithm {a!r}, roster is {ALGORITHMS}")
        if self.x_axis not in ("size", "deadline", "beta"):
            raise ConfigInvalid(f"x_axis must be size, deadline or beta, got {self.x_axis!r}")


@dataclass
class ExperimentRecord:
    scenario: str
    seed: int
    algorithm: str
    V: int
    D: int
    phi: int
    ms: int = 0
    trajectory_ref: str = ""
    error: str = ""


def _parse_deadline(text):
    text = text.strip()
    if ":" in text:
        lo, hi = text.split(":")
        return ("interval", int(lo), int(hi))
    return ("fixed", int(text))


def parse_config(path, overrides=None):
    """Read `[scenario]` sections of key = value pairs into ScenarioConfigs.

    `overrides` (a dict) wins over file values in every section; unknown
    keys are rejected.
    """
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise ConfigInvalid(f"cannot read config file {path}")
    out = []
    for section in cp.sections():
        raw = dict(cp[section])
        raw.update(overrides or {})
        known = {
            "field", "nodes", "range", "sink", "source_fraction", "deadline",
            "alpha", "beta", "runs", "iterations", "algorithms", "seed", "x_axis",
            "exact_max_nodes", "exact_max_trees",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigInvalid(f"unknown keys in [{section}]: {sorted(unknown)}")
        try:
            cfg = ScenarioConfig(
                name=section,
                field_side=float(raw.get("field", 300)),
                node_counts=tuple(int(x) for x in str(raw.get("nodes", "100")).split(",")),
                comm_range=float(raw.get("range", 75)),
                sink_pos=tuple(float(x) for x in str(raw.get("sink", "150,300")).split(",")),
                source_fraction=float(raw.get("source_fraction", 0.8)),
                deadline=_parse_deadline(str(raw.get("deadline", "10:20"))),
                alpha=float(raw.get("alpha", 0.2)),
                beta=float(raw.get("beta", 2)),
                runs=int(raw.get("runs", 50)),
                iterations=int(raw.get("iterations", 50)),
                algorithms=tuple(a.strip() for a in str(raw.get(
                    "algorithms", "approx1,approx2,approx1h,approx2h,fastinit,baseline"
                )).split(",")),
                base_seed=int(raw.get("seed", 1)),
                x_axis=str(raw.get("x_axis", "size")),
                exact_budget=EnumerationBudget(
                    max_trees=int(raw.get("exact_max_trees", 5_000_000)),
                    max_nodes=int(raw.get("exact_max_nodes", 15)),
                ),
            )
        except (ValueError, TypeError) as exc:
            raise ConfigInvalid(f"bad value in [{section}]: {exc}") from exc
        out.append(cfg)
    if not out:
        raise ConfigInvalid(f"no [scenario] sections in {path}")
    return out


def connected_topology(v, cfg, seed):
    """Generate at seed, bumping the seed until the deployment is connected."""
    s = seed
    while True:
        topo = topo_mod.generate_rgg(
            v, cfg.field_side, cfg.field_side, cfg.comm_range,
            cfg.sink_pos, cfg.source_fraction, s,
        )
        if topo_mod.is_connected(topo):
            return topo, s
        s += 1


def _algo_seed(cfg, v, run_idx, algo_idx):
    ss = np.random.SeedSequence(entropy=cfg.base_seed, spawn_key=(v, run_idx, algo_idx))
    return int(ss.generate_state(1)[0])


def _run_algorithm(algo, cfg, topo, D, seed, traj_path=None):
    """Returns (phi, trajectory or None)."""
    if algo == "baseline":
        return optimal_phi(git_tree(topo), D, topo), None
    if algo == "fastinit":
        return optimal_phi(fast_init_tree(topo, D), D, topo), None
    if algo == "z_optimal":
        _, phi = z_optimal(topo, D, cfg.exact_budget)
        return phi, None
    initial = fast_init_tree(topo, D) if algo.endswith("h") else git_tree(topo)
    estimator = "approx1" if algo.startswith("approx1") else "approx2"
    mc = MarkovConfig(
        alpha=cfg.alpha, beta=cfg.beta, iterations=cfg.iterations,
        estimator=estimator, seed=seed,
    )
    result = run(mc, topo, D, initial)
    if traj_path is not None:
        write_trajectory(traj_path, result.trajectory)
    return result.best_phi, result.trajectory


def run_scenario(cfg, out_dir=None, trajectories=False):
    """Execute one scenario; returns records ordered by (V, run, algorithm)."""
    records = []
    for v in cfg.node_counts:
        for run_idx in range(cfg.runs):
            topo, topo_seed = connected_topology(v, cfg, cfg.base_seed + run_idx)
            drng = np.random.default_rng(
                np.random.SeedSequence(entropy=cfg.base_seed, spawn_key=(v, run_idx))
            )
            if cfg.deadline[0] == "fixed":
                D = cfg.deadline[1]
            else:
                D = int(drng.integers(cfg.deadline[1], cfg.deadline[2] + 1))
            for algo_idx, algo in enumerate(cfg.algorithms):
                if algo == "z_optimal" and v > cfg.exact_budget.max_nodes:
                    continue
                traj_path = None
                if trajectories and out_dir is not None and algo.startswith("approx"):
                    traj_path = f"{out_dir}/traj_{cfg.name}_{algo}_V{v}_run{run_idx}.csv"
                seed = _algo_seed(cfg, v, run_idx, algo_idx)
                t0 = time.perf_counter()
                try:
                    phi, _ = _run_algorithm(algo, cfg, topo, D, seed, traj_path)
                    err = ""
                except Exception as exc:  # captured in the record, batch continues
                    phi, err = -1, f"{type(exc).__name__}: {exc}"
                ms = int(round((time.perf_counter() - t0) * 1000))
                records.append(ExperimentRecord(
                    scenario=cfg.name, seed=topo_seed, algorithm=algo, V=v, D=D,
                    phi=phi, ms=ms, trajectory_ref=traj_path or "", error=err,
                ))
    return records


@dataclass(frozen=True)
class SummaryRow:
    scenario: str
    algorithm: str
    x: float
    mean_phi: float
    ci95: float


def summarize(records, x_axis="size", beta=None):
    """Per-(algorithm, x) mean and two-sided 95% Student-t half-width.

    A single-record group reports a half-width of 0 by convention.
    Invariant under record permutation.
    """
    if not records:
        raise EmptyGroup("no records to summarize")
    groups = {}
    for r in records:
        if r.error:
            continue
        if x_axis == "size":
            x = r.V
        elif x_axis == "deadline":
            x = r.D
        else:
            x = beta
        groups.setdefault((r.scenario, r.algorithm, x), []).append(r.phi)
    if not groups:
        raise EmptyGroup("all records carry errors")
    out = []
    for (scenario, algo, x), phis in sorted(groups.items()):
        phis.sort()  # fixed summation order: exactly permutation-invariant
        n = len(phis)
        mean = float(np.mean(phis))
        if n == 1 or float(np.std(phis)) == 0.0:
            half = 0.0
        else:
            sem = float(np.std(phis, ddof=1)) / math.sqrt(n)
            half = float(stats.t.ppf(0.975, n - 1)) * sem
        out.append(SummaryRow(scenario=scenario, algorithm=algo, x=float(x),
                              mean_phi=mean, ci95=half))
    return out


def write_results(path, records, timing=False):
    """results.csv: scenario,seed,algorithm,V,D,phi,ms.

    The ms column is 0 unless timing is enabled, keeping default output
    byte-identical across repeated runs with the same seed.
    """
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["scenario", "seed", "algorithm", "V", "D", "phi", "ms"])
        for r in records:
            w.writerow([
                r.scenario, r.seed, r.algorithm, r.V, r.D,
                "" if r.error else r.phi, r.ms if timing else 0,
            ])


def write_summary(path, rows):
    """summary.csv: scenario,algorithm,x,mean_phi,ci95 (Student-t, 95% two-sided)."""
    with open(path, "w", newline="") as f:
        f.write("# ci95 is the two-sided 95% Student-t half-width; 0 when n=1\n")
        w = csv.writer(f)
        w.writerow(["scenario", "algorithm", "x", "mean_phi", "ci95"])
        for r in rows:
            w.writerow([r.scenario, r.algorithm, f"{r.x:.9g}",
                        f"{r.mean_phi:.9g}", f"{r.ci95:.9g}"])


def run_experiment(configs, out_dir, timing=False, trajectories=False):
    """Run every scenario, write results.csv and summary.csv under out_dir."""
    all_records = []
    all_rows = []
    for cfg in configs:
        records = run_scenario(cfg, out_dir=out_dir, trajectories=trajectories)
        all_records.extend(records)
        all_rows.extend(summarize(records, x_axis=cfg.x_axis, beta=cfg.beta))
    write_results(f"{out_dir}/results.csv", all_records, timing=timing)
    write_summary(f"{out_dir}/summary.csv", all_rows)
    return all_records, all_rows
