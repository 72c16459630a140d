import csv
import json
import os

import numpy as np
import pytest

from mimo_islr import cli, metrics
from mimo_islr.model import ConfigError, Constraint

SMALL = """\
mt: 3
n: 8
constraint: {constraint}
alphabet_size: 4
gamma_p_db: 1.5
eta: {eta}
zeta: 1.0e-6
max_sweeps: 20
seed: 7
output_dir: out
"""


def write(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_default_scenario_config(tmp_path):
    p = write(tmp_path, "mt: 8\nn: 64\nconstraint: continuous_phase\neta: 0.5\n")
    pc = cli.parse_config(p)
    assert pc.run.zeta == 1e-6 and not pc.is_sweep
    assert len(pc.run.scenario.theta_d) == 5 and len(pc.run.scenario.theta_u) == 32
    assert pc.output_dir == tmp_path / "output"


def test_explicit_regions_and_aliases(tmp_path):
    p = write(tmp_path, "mt: 4\nn: 16\nconstraint: C2\ngamma_p_db: 3\neta: [0, 1]\n"
                        "theta_d: [0, 10, 5]\ntheta_u: [[-90, -10, 10], [20, 90, 10]]\ntrials: 3\n")
    pc = cli.parse_config(p)
    assert pc.run.constraint.kind is Constraint.PAR
    assert pc.run.constraint.gamma_p == pytest.approx(10 ** 0.3)
    assert pc.is_sweep and pc.etas == [0.0, 1.0] and pc.trials == 3
    assert len(pc.run.scenario.theta_d) == 3


@pytest.mark.parametrize("text, match", [
    ("n: 4\nconstraint: c3\neta: 0\n", "missing required key 'mt'"),
    ("mt: 4\nn: 8\nconstraint: c3\neta: 0\nbogus: 1\n", r"cfg.yaml:5: bogus: unknown key"),
    ("mt: 4\nn: 8\nconstraint: c9\neta: 0\n", r"cfg.yaml:3: constraint"),
    ("mt: 4\nn: [1\n", r"cfg.yaml:3: YAML parse error"),
    ("mt: four\nn: 8\nconstraint: c3\neta: 0\n", r"cfg.yaml:1: mt: expected an integer"),
    ("mt: 4\nn: 8\nconstraint: c4\neta: 0\n", "alphabet_size"),
    ("mt: 4\nn: 8\nconstraint: c3\neta: [0, 3]\n", r"eta out of \[0,1\]"),
    ("- 1\n- 2\n", "mapping"),
])
def test_config_errors(tmp_path, text, match):
    with pytest.raises(ConfigError, match=match):
        cli.parse_config(write(tmp_path, text))


def test_run_exports_five_files(tmp_path):
    p = write(tmp_path, SMALL.format(constraint="continuous_phase", eta=1.0))
    assert cli.main(["run", str(p)]) == 0
    out = tmp_path / "out"
    assert sorted(os.listdir(out)) == ["beampattern.csv", "convergence.csv", "correlation.csv",
                                      "metrics.json", "waveform.csv"]
    summary = json.loads((out / "metrics.json").read_text())
    assert summary["config"]["mt"] == 3 and summary["stop_reason"] in {"threshold", "stall", "max_sweeps"}

    f = [float(r["f_o"]) for r in read_csv(out / "convergence.csv")]
    assert np.all(np.diff(f) <= 1e-12)

    corr = read_csv(out / "correlation.csv")
    assert len(corr) == 9 * 15
    zero = [float(r["abs_r"]) for r in corr if r["m"] == r["l"] and r["k"] == "0"]
    np.testing.assert_allclose(zero, 8.0, rtol=1e-12)

    bp = read_csv(out / "beampattern.csv")
    assert len(bp) == 361 and float(bp[0]["theta_deg"]) == -90 and float(bp[-1]["theta_deg"]) == 90


def test_spatial_run_peaks_inside_desired_region(tmp_path):
    # eight elements give a beam narrow enough to land inside [-55, -35]
    text = SMALL.format(constraint="continuous_phase", eta=1.0).replace("mt: 3", "mt: 8")
    assert cli.main(["run", str(write(tmp_path, text))]) == 0
    bp = read_csv(tmp_path / "out" / "beampattern.csv")
    peak = max(bp, key=lambda r: float(r["P_linear"]))
    assert -55 <= float(peak["theta_deg"]) <= -35


def test_waveform_and_metrics_round_trip(tmp_path, capsys):
    p = write(tmp_path, SMALL.format(constraint="energy", eta=0.5))
    assert cli.main(["run", str(p)]) == 0
    out = tmp_path / "out"
    run_summary = json.loads((out / "metrics.json").read_text())
    ws = np.asarray(cli.read_waveform_csv(out / "waveform.csv"))
    pc = cli.parse_config(p)
    assert metrics.spatial_islr(ws, pc.run.scenario) == pytest.approx(run_summary["spatial_islr"], rel=1e-12)

    capsys.readouterr()
    assert cli.main(["metrics", str(out / "waveform.csv"), str(p), "--output-dir", str(tmp_path / "m")]) == 0
    again = json.loads((tmp_path / "m" / "metrics.json").read_text())
    for key in ("spatial_islr", "range_islr", "objective"):
        assert again[key] == pytest.approx(run_summary[key], rel=1e-9)
    assert json.loads(capsys.readouterr().out)["range_islr"] == again["range_islr"]


def test_pareto_writes_table(tmp_path):
    p = write(tmp_path, SMALL.format(constraint="discrete_phase", eta="[0, 0.25, 0.5, 0.75, 1]"))
    assert cli.main(["pareto", str(p)]) == 0
    rows = read_csv(tmp_path / "out" / "pareto.csv")
    assert [float(r["eta"]) for r in rows] == [0, 0.25, 0.5, 0.75, 1]
    assert (tmp_path / "out" / "eta_0.25" / "waveform.csv").exists()


def test_run_rejects_eta_list(tmp_path, capsys):
    p = write(tmp_path, SMALL.format(constraint="continuous_phase", eta="[0, 1]"))
    assert cli.main(["run", str(p)]) == 3
    err = capsys.readouterr().err
    assert err.startswith("error: config:") and err.count("\n") == 1


def test_exit_codes(tmp_path, capsys):
    assert cli.main([]) == 2
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["run", str(tmp_path / "missing.yaml")]) == 3
    bad_wave = write(tmp_path, "m,n,re,im\n0,0,0,0\n0,1,0,0\n", "w.csv")
    cfg = write(tmp_path, "mt: 1\nn: 2\nconstraint: c1\neta: 1\n")
    assert cli.main(["metrics", str(bad_wave), str(cfg)]) == 4  # zero desired power
    for line in capsys.readouterr().err.strip().splitlines():
        assert line.startswith("error: ")


def test_atomic_write_leaves_nothing_on_failure(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        cli._atomic_write(tmp_path / "x.csv", "a,b\n")
    assert os.listdir(tmp_path) == []


def test_full_precision_format():
    x = 0.1 + 0.2
    assert float(cli._fmt(x)) == x
