#!/usr/bin/env python3
"""Render experiment figures from the runner's CSV outputs.

Reads only the documented CSV schemas (summary.csv, results.csv and the
trajectory CSVs); never mutates its inputs. Tests assert on the extracted
series data model rather than rasterized pixels, so rendering stays
backend-independent.

Usage: render.py --kind KIND --in RESULTS_DIR --out FIG.png
"""

import argparse
import csv
import glob
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


KINDS = (
    "qoa_vs_deadline",
    "qoa_vs_size",
    "improvement_vs_beta",
    "qoa_vs_iterations",
    "phi_per_transition",
)

X_LABELS = {
    "qoa_vs_deadline": "deadline (slots)",
    "qoa_vs_size": "network size",
    "improvement_vs_beta": "beta",
    "qoa_vs_iterations": "iteration",
    "phi_per_transition": "transition",
}


class MissingColumn(Exception):
    pass


class EmptyData(Exception):
    pass


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple          # CSV paths; meaning depends on the kind
    output: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


@dataclass
class Series:
    label: str
    x: list = field(default_factory=list)
    y: list = field(default_factory=list)
    yerr: list = field(default_factory=list)   # empty means no error bars


def _read_csv(path):
    """Rows of a CSV, skipping `#` comment lines; error if no data rows."""
    with open(path) as f:
        lines = [ln for ln in f if not ln.startswith("#")]
    rows = list(csv.DictReader(lines))
    if not rows:
        raise EmptyData(f"no data rows in {path}")
    return rows


def _require(rows, path, *cols):
    for c in cols:
        if c not in rows[0]:
            raise MissingColumn(f"{path} lacks required column {c!r}")


def _summary_series(path):
    rows = _read_csv(path)
    _require(rows, path, "algorithm", "x", "mean_phi", "ci95")
    series = {}
    for r in rows:
        s = series.setdefault(r["algorithm"], Series(label=r["algorithm"]))
        s.x.append(float(r["x"]))
        s.y.append(float(r["mean_phi"]))
        s.yerr.append(float(r["ci95"]))
    for s in series.values():
        order = sorted(range(len(s.x)), key=lambda k: s.x[k])
        s.x = [s.x[k] for k in order]
        s.y = [s.y[k] for k in order]
        s.yerr = [s.yerr[k] for k in order]
    return [series[k] for k in sorted(series)]


def _improvement_series(path):
    """Percent improvement of each algorithm over the baseline at equal x."""
    base = {}
    series = _summary_series(path)
    for s in series:
        if s.label == "baseline":
            base = dict(zip(s.x, s.y))
    if not base:
        raise EmptyData(f"{path} has no baseline rows to compare against")
    out = []
    for s in series:
        if s.label == "baseline":
            continue
        imp = Series(label=s.label)
        for x, y in zip(s.x, s.y):
            if x in base and base[x] > 0:
                imp.x.append(x)
                imp.y.append(100.0 * (y / base[x] - 1.0))
        if imp.x:
            out.append(imp)
    if not out:
        raise EmptyData(f"{path} has no overlapping x points with the baseline")
    return out


def _trajectory_rows(path):
    rows = _read_csv(path)
    _require(rows, path, "step", "accepted", "phi_exact")
    return rows


def _iterations_series(paths):
    """Mean running-best quality per iteration, one series per algorithm.

    Algorithm names are taken from the trajectory filename convention
    traj_<scenario>_<algo>_V<v>_run<r>.csv; files that do not match are
    grouped under their basename.
    """
    groups = {}
    for path in paths:
        name = os.path.basename(path)
        parts = name[:-4].split("_")
        label = parts[2] if len(parts) >= 4 and parts[0] == "traj" else name
        rows = _trajectory_rows(path)
        best, curve = 0.0, []
        for r in rows:
            best = max(best, float(r["phi_exact"]))
            curve.append(best)
        groups.setdefault(label, []).append(curve)
    out = []
    for label in sorted(groups):
        curves = groups[label]
        horizon = min(len(c) for c in curves)
        s = Series(label=label)
        for k in range(horizon):
            s.x.append(k + 1)
            s.y.append(sum(c[k] for c in curves) / len(curves))
        out.append(s)
    return out


def _transition_series(path):
    """Quality after each accepted transition, plus the running maximum."""
    rows = _trajectory_rows(path)
    accepted = [r for r in rows if r["accepted"] == "1"]
    if not accepted:
        raise EmptyData(f"{path} contains no accepted transitions")
    phi = Series(label="phi")
    best = Series(label="best")
    top = 0.0
    for k, r in enumerate(accepted, start=1):
        v = float(r["phi_exact"])
        top = max(top, v)
        phi.x.append(k)
        phi.y.append(v)
        best.x.append(k)
        best.y.append(top)
    return [phi, best]


def extract_series(spec):
    """The figure's data model; pure function of the input CSVs."""
    if spec.kind in ("qoa_vs_deadline", "qoa_vs_size"):
        return _summary_series(spec.inputs[0])
    if spec.kind == "improvement_vs_beta":
        return _improvement_series(spec.inputs[0])
    if spec.kind == "qoa_vs_iterations":
        if not spec.inputs:
            raise EmptyData("no trajectory files given")
        return _iterations_series(spec.inputs)
    return _transition_series(spec.inputs[0])


def render(spec):
    """Write one figure for the spec and return the plotted series."""
    series = extract_series(spec)
    fig, ax = plt.subplots(figsize=(6, 4))
    for s in series:
        if s.yerr:
            ax.errorbar(s.x, s.y, yerr=s.yerr, marker="o", capsize=3, label=s.label)
        else:
            ax.plot(s.x, s.y, marker="o", label=s.label)
    ax.set_xlabel(X_LABELS[spec.kind])
    ax.set_ylabel("improvement over baseline (%)"
                  if spec.kind == "improvement_vs_beta" else "quality of aggregation")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=120)
    plt.close(fig)
    return series


def spec_from_args(kind, results_dir, out, traj=None):
    """Map --in DIR onto the concrete CSV inputs each kind needs."""
    if kind in ("qoa_vs_deadline", "qoa_vs_size", "improvement_vs_beta"):
        inputs = (os.path.join(results_dir, "summary.csv"),)
    elif kind == "qoa_vs_iterations":
        inputs = tuple(sorted(glob.glob(os.path.join(results_dir, "traj_*.csv"))))
    else:
        if traj is not None:
            inputs = (traj,)
        else:
            found = sorted(glob.glob(os.path.join(results_dir, "traj_*.csv")))
            if not found:
                raise EmptyData(f"no trajectory CSVs under {results_dir}")
            inputs = (found[0],)
    return FigureSpec(kind=kind, inputs=inputs, output=out)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=KINDS, required=True)
    ap.add_argument("--in", dest="results_dir", required=True,
                    help="directory holding summary.csv / trajectory CSVs")
    ap.add_argument("--out", required=True, help="output image path")
    ap.add_argument("--traj", default=None,
                    help="specific trajectory CSV (phi_per_transition only)")
    args = ap.parse_args(argv)
    spec = spec_from_args(args.kind, args.results_dir, args.out, args.traj)
    series = render(spec)
    print(f"wrote {args.out} with {len(series)} series")


if __name__ == "__main__":
    main()
