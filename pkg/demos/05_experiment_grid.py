#!/usr/bin/env python3
"""Desk-scale reproduction of the experiment grid, with figures.

Runs three scenarios (quality vs network size, vs deadline, and a beta
sweep), writes results.csv / summary.csv / trajectory CSVs under
demos/output/, then renders one figure per kind with plots/render.py.

Takes a couple of minutes at these sizes.
"""

import os
import subprocess
import sys

from aggtree.experiment import ScenarioConfig, run_experiment

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "output")
os.makedirs(OUT, exist_ok=True)

scenarios = [
    ScenarioConfig(
        name="size", field_side=300.0, node_counts=(30, 40, 50, 60), comm_range=75.0,
        sink_pos=(150.0, 300.0), source_fraction=0.8, deadline=("fixed", 8),
        runs=8, iterations=60, base_seed=1, x_axis="size",
        algorithms=("approx1", "approx1h", "approx2h", "fastinit", "baseline"),
    ),
    ScenarioConfig(
        name="deadline", field_side=300.0, node_counts=(40,), comm_range=75.0,
        sink_pos=(150.0, 300.0), source_fraction=0.8, deadline=("interval", 4, 12),
        runs=24, iterations=60, base_seed=11, x_axis="deadline",
        algorithms=("approx1h", "fastinit", "baseline"),
    ),
] + [
    ScenarioConfig(
        name=f"beta{beta}", field_side=300.0, node_counts=(40,), comm_range=75.0,
        sink_pos=(150.0, 300.0), source_fraction=0.8, deadline=("fixed", 8),
        runs=8, iterations=60, base_seed=21, x_axis="beta", beta=beta,
        algorithms=("approx1", "approx2", "baseline"),
    )
    for beta in (0.5, 1.0, 2.0, 4.0)
]

records, rows = run_experiment(scenarios, OUT, trajectories=True)
print(f"wrote {len(records)} records and {len(rows)} summary rows under {OUT}")

render = os.path.join(HERE, os.pardir, "plots", "render.py")
for kind in ("qoa_vs_size", "qoa_vs_deadline", "improvement_vs_beta",
             "qoa_vs_iterations", "phi_per_transition"):
    fig = os.path.join(OUT, f"{kind}.png")
    subprocess.run([sys.executable, render, "--kind", kind, "--in", OUT, "--out", fig],
                   check=True)
print(f"figures written to {OUT}")
