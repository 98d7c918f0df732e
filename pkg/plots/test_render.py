import os

import pytest

from plots.render import (
    EmptyData,
    FigureSpec,
    MissingColumn,
    extract_series,
    main,
    render,
    spec_from_args,
)

SUMMARY = """\
# ci95 is the two-sided 95% Student-t half-width; 0 when n=1
scenario,algorithm,x,mean_phi,ci95
fig,approx1h,10,20.5,1.25
fig,approx1h,15,24,0.5
fig,approx1h,20,30,2
fig,baseline,10,10,0.5
fig,baseline,15,12,1
fig,baseline,20,15,1.5
"""

BETA_SUMMARY = """\
scenario,algorithm,x,mean_phi,ci95
b,approx1,1,15,0
b,approx1,2,18,0
b,baseline,1,10,0
b,baseline,2,10,0
"""

TRAJ = """\
step,mover,old_parent,new_parent,phi_prev_est,phi_next_est,accept_prob,accepted,phi_exact
1,4,2,1,3,4,0.8,1,3
2,0,1,3,3,3,0.4,0,3
3,2,0,-1,3,5,0.8,1,5
4,1,3,0,5,4,0.3,1,4
"""


@pytest.fixture
def golden_dir(tmp_path):
    (tmp_path / "summary.csv").write_text(SUMMARY)
    (tmp_path / "traj_fig_approx1_V5_run0.csv").write_text(TRAJ)
    return tmp_path


def test_summary_series_roundtrip(golden_dir):
    spec = spec_from_args("qoa_vs_deadline", str(golden_dir), str(golden_dir / "f.png"))
    series = extract_series(spec)
    assert [s.label for s in series] == ["approx1h", "baseline"]
    a, b = series
    assert a.x == [10.0, 15.0, 20.0]
    assert a.y == [20.5, 24.0, 30.0]
    assert a.yerr == [1.25, 0.5, 2.0]
    assert b.y == [10.0, 12.0, 15.0]


def test_improvement_series(tmp_path):
    (tmp_path / "summary.csv").write_text(BETA_SUMMARY)
    spec = spec_from_args("improvement_vs_beta", str(tmp_path), str(tmp_path / "f.png"))
    (series,) = extract_series(spec)
    assert series.label == "approx1"
    assert series.x == [1.0, 2.0]
    assert series.y == [pytest.approx(50.0), pytest.approx(80.0)]


def test_iterations_series(golden_dir):
    spec = spec_from_args("qoa_vs_iterations", str(golden_dir), str(golden_dir / "f.png"))
    (series,) = extract_series(spec)
    assert series.label == "approx1"
    assert series.x == [1, 2, 3, 4]
    assert series.y == [3.0, 3.0, 5.0, 5.0]  # running best


def test_transition_series(golden_dir):
    spec = spec_from_args("phi_per_transition", str(golden_dir), str(golden_dir / "f.png"))
    phi, best = extract_series(spec)
    assert phi.y == [3.0, 5.0, 4.0]
    assert best.y == [3.0, 5.0, 5.0]
    assert phi.x == [1, 2, 3]


def test_acceptance_criterion_13(golden_dir):
    """One image per figure kind from the golden fixture; parsed-back series
    equal the fixture values exactly."""
    (golden_dir / "beta").mkdir()
    (golden_dir / "beta" / "summary.csv").write_text(BETA_SUMMARY)
    expectations = {
        "qoa_vs_deadline": (str(golden_dir), 2),
        "qoa_vs_size": (str(golden_dir), 2),
        "improvement_vs_beta": (str(golden_dir / "beta"), 1),
        "qoa_vs_iterations": (str(golden_dir), 1),
        "phi_per_transition": (str(golden_dir), 2),
    }
    for kind, (src, n_series) in expectations.items():
        out = golden_dir / f"{kind}.png"
        spec = spec_from_args(kind, src, str(out))
        drawn = render(spec)
        assert out.exists() and out.stat().st_size > 0
        assert len(drawn) == n_series
        assert drawn == extract_series(spec), "rendering must not disturb the data model"
    deadline = extract_series(spec_from_args("qoa_vs_deadline", str(golden_dir), "x.png"))
    assert deadline[0].y == [20.5, 24.0, 30.0]
    print("PASS criterion 13: render emits every figure kind; series match the fixture")


def test_empty_csv_raises(tmp_path):
    (tmp_path / "summary.csv").write_text("scenario,algorithm,x,mean_phi,ci95\n")
    spec = FigureSpec("qoa_vs_size", (str(tmp_path / "summary.csv"),), str(tmp_path / "f.png"))
    with pytest.raises(EmptyData):
        extract_series(spec)


def test_missing_column_raises(tmp_path):
    (tmp_path / "summary.csv").write_text("scenario,algorithm,x,mean\nfig,a,1,2\n")
    spec = FigureSpec("qoa_vs_size", (str(tmp_path / "summary.csv"),), str(tmp_path / "f.png"))
    with pytest.raises(MissingColumn):
        extract_series(spec)


def test_inputs_never_mutated(golden_dir):
    before = (golden_dir / "summary.csv").read_bytes()
    render(spec_from_args("qoa_vs_size", str(golden_dir), str(golden_dir / "g.png")))
    assert (golden_dir / "summary.csv").read_bytes() == before


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        FigureSpec("pie_chart", ("x.csv",), "f.png")


def test_cli_main(golden_dir, capsys):
    out = golden_dir / "cli.png"
    main(["--kind", "qoa_vs_deadline", "--in", str(golden_dir), "--out", str(out)])
    assert out.exists()
    assert "wrote" in capsys.readouterr().out
