"""End-to-end checks of the command line emitters.

Each test writes a JSON config into tmp_path, runs the installed CLI in a
subprocess, and inspects exit code, stdout/stderr, and the emitted files.
"""

import csv
import json
import subprocess
import sys

import numpy as np
from pytest import approx

from burstgic.region import sym_region

U1 = {"k": 3, "q": 0.3, "P_db": 30, "a": 0.5}
U2 = {"k": 2, "q": 0.4, "P_db": 30, "a": 0.7}
USYM = {"k": 2, "q": 0.3, "P_db": 20, "a": 0.5}

BUFFERS_CFG = {"scenario": "buffers", "user": {"k": 2, "q": 0.3},
               "n_values": [300, 600], "N": 2, "theta": 1.3, "delta": 0.5,
               "trials": 30, "nprime": 20}
DESIGN_CFG = {"scenario": "design", "user1": U1, "user2": U2,
              "d_grid": [0.05, 3.0, 60]}
GRID_CFG = {"scenario": "grid", "user1": USYM, "user2": USYM,
            "N1": 2, "N2": 2, "theta1": 1.0, "theta2": 1.0, "alpha": 0.5}
DETECT_CFG = {"scenario": "detect", "n_values": [400, 1600],
              "gamma1_db": 20, "gamma2_db": 20, "a1": 0.1, "a2": 0.1,
              "eps": 0.48, "M": 8, "trials": 60}


def run_cli(command, cfg, tmp_path, out="out", seed=11, extra=()):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    args = [sys.executable, "-m", "burstgic.cli", command,
            "--config", str(cfg_path), "--out", str(tmp_path / out),
            "--seed", str(seed), *extra]
    return subprocess.run(args, capture_output=True, text=True)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# buffers

def test_buffers_emits_both_files(tmp_path):
    res = run_cli("buffers", BUFFERS_CFG, tmp_path)
    assert res.returncode == 0, res.stderr
    gap = read_rows(tmp_path / "out" / "delay_gap.csv")
    imm = read_rows(tmp_path / "out" / "immediacy.csv")
    assert list(gap[0]) == ["n", "j", "lag_freq", "trials"]
    assert list(imm[0]) == ["n", "violation_freq", "trials"]
    assert {int(r["n"]) for r in gap} == {300, 600}
    assert all(0.0 <= float(r["lag_freq"]) <= 1.0 for r in gap)
    assert len(imm) == 2


def test_buffers_resonant_ratio_is_infeasible(tmp_path):
    cfg = dict(BUFFERS_CFG, user={"k": 2, "q": 0.25}, theta=1.0)
    res = run_cli("buffers", cfg, tmp_path)
    assert res.returncode == 3
    # diagnostic names the divisor m of theta that collides with mu
    assert "integer multiple of theta/1" in res.stderr


def test_buffers_seed_reproducible(tmp_path):
    res_a = run_cli("buffers", BUFFERS_CFG, tmp_path, out="a", seed=42)
    res_b = run_cli("buffers", BUFFERS_CFG, tmp_path, out="b", seed=42)
    assert res_a.returncode == 0 and res_b.returncode == 0
    for name in ("delay_gap.csv", "immediacy.csv"):
        assert (tmp_path / "a" / name).read_bytes() == \
               (tmp_path / "b" / name).read_bytes()


# ---------------------------------------------------------------------------
# design

def test_design_half_lambda_reports_d_max(tmp_path):
    cfg = dict(DESIGN_CFG, R1_over_lambda=0.5, R2_over_lambda=0.5)
    res = run_cli("design", cfg, tmp_path)
    assert res.returncode == 0, res.stderr
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["active_set"] == [[1, 1]]
    assert summary["d_max"]["1,1"] == approx(0.83, abs=0.02)
    curve = read_rows(tmp_path / "out" / "outage_N1_1.csv")
    assert len(curve) == 60


def test_design_curves_cross_near_two(tmp_path):
    cfg = dict(DESIGN_CFG, R1_over_lambda=0.7, R2_over_lambda=0.7)
    res = run_cli("design", cfg, tmp_path)
    assert res.returncode == 0, res.stderr
    rows = read_rows(tmp_path / "out" / "optimal.csv")
    pairs = [(float(r["d"]), (r["N1"], r["N2"])) for r in rows]
    switches = [0.5 * (a[0] + b[0]) for a, b in zip(pairs, pairs[1:])
                if a[1] != b[1]]
    assert any(1.9 <= d <= 2.1 for d in switches)


def test_design_always_reliable_notice(tmp_path):
    cfg = dict(DESIGN_CFG, R1_over_lambda=0.1, R2_over_lambda=0.1)
    res = run_cli("design", cfg, tmp_path)
    assert res.returncode == 0, res.stderr
    assert "ALWAYS_RELIABLE" in res.stdout
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["always_reliable"] is True
    for n1, n2 in summary["active_set"]:
        assert read_rows(tmp_path / "out" / f"outage_N{n1}_{n2}.csv") == []


def test_design_empty_active_set_is_infeasible(tmp_path):
    low1 = dict(U1, P=0.2)
    low2 = dict(U2, P=0.2)
    for u in (low1, low2):
        u.pop("P_db")
    cfg = dict(DESIGN_CFG, user1=low1, user2=low2,
               R1_over_lambda=0.7, R2_over_lambda=0.7)
    res = run_cli("design", cfg, tmp_path)
    assert res.returncode == 3
    assert "active set" in res.stderr


# ---------------------------------------------------------------------------
# region

def test_region_grid_metadata_has_single_user_cap(tmp_path):
    cfg = dict(GRID_CFG, m_grid=8, resolution=0.25)
    res = run_cli("region", cfg, tmp_path)
    assert res.returncode == 0, res.stderr
    meta = json.loads((tmp_path / "out" / "region_meta.json").read_text())
    assert meta["rbar_c1"] == approx(4.8774, abs=1e-3)
    assert meta["rbar_c2"] == approx(4.8774, abs=1e-3)
    rows = read_rows(tmp_path / "out" / "region_points.csv")
    nx = round((meta["box"][1] - meta["box"][0]) / meta["cell"][0])
    assert len(rows) == nx * nx


def test_region_diagonal_matches_symmetric_solver(tmp_path):
    cfg = dict(GRID_CFG, m_grid=40, resolution=0.1)
    res = run_cli("region", cfg, tmp_path)
    assert res.returncode == 0, res.stderr
    meta = json.loads((tmp_path / "out" / "region_meta.json").read_text())
    cell = meta["cell"][0]
    rows = read_rows(tmp_path / "out" / "region_points.csv")
    diag = [(float(r["R_c1"]), int(r["member"])) for r in rows
            if abs(float(r["R_c1"]) - float(r["R_c2"])) < 1e-12]
    assert len(diag) > 10
    intervals = sym_region(2, 1.0, 0.6, 0.5, 100.0, 0.5).intervals
    for x, member in diag:
        inside = any(lo + cell < x < hi - cell for lo, hi in intervals)
        outside = all(x < lo - cell or x > hi + cell for lo, hi in intervals)
        if inside:
            assert member == 1, f"missing diagonal point {x}"
        elif outside:
            assert member == 0, f"spurious diagonal point {x}"


def test_region_m_grid_refinement_grows_mask(tmp_path):
    coarse = run_cli("region", dict(GRID_CFG, m_grid=3, resolution=0.25),
                     tmp_path, out="coarse")
    fine = run_cli("region", dict(GRID_CFG, m_grid=8, resolution=0.25),
                   tmp_path, out="fine")
    assert coarse.returncode == 0 and fine.returncode == 0
    got = {}
    for name in ("coarse", "fine"):
        rows = read_rows(tmp_path / name / "region_points.csv")
        got[name] = np.array([int(r["member"]) for r in rows], dtype=bool)
    assert np.all(got["fine"] | ~got["coarse"])
    assert got["fine"].sum() > got["coarse"].sum()


def test_region_symmetric_scenario(tmp_path):
    cfg = {"scenario": "symmetric", "N": 2, "theta": 1.0, "lam": 0.6,
           "a": 0.5, "P_db": 20, "alpha": 0.5, "curve_points": 64}
    res = run_cli("region", cfg, tmp_path)
    assert res.returncode == 0, res.stderr
    meta = json.loads((tmp_path / "out" / "sym_intervals.json").read_text())
    assert meta["gamma0"] == approx(2.0 + 2.0 * np.sqrt(2.0))
    assert meta["P"] == approx(100.0)
    lo, hi = meta["intervals"][0]
    assert lo == approx(0.6)
    rows = read_rows(tmp_path / "out" / "sym_curves.csv")
    assert list(rows[0]) == ["gamma", "f", "g", "power_line"]
    assert len(rows) == 64


def test_region_symmetric_skips_curves_at_large_alpha(tmp_path):
    cfg = {"scenario": "symmetric", "N": 2, "theta": 1.0, "lam": 0.6,
           "a": 0.5, "P_db": 20, "alpha": 5.0}
    res = run_cli("region", cfg, tmp_path)
    assert res.returncode == 0, res.stderr
    meta = json.loads((tmp_path / "out" / "sym_intervals.json").read_text())
    assert len(meta["intervals"]) == 2  # disconnected at this spacing
    assert "gamma0" not in meta
    assert not (tmp_path / "out" / "sym_curves.csv").exists()


# ---------------------------------------------------------------------------
# detect

def test_detect_error_trend_and_schema(tmp_path):
    res = run_cli("detect", DETECT_CFG, tmp_path, seed=9)
    assert res.returncode == 0, res.stderr
    rows = read_rows(tmp_path / "out" / "detect.csv")
    assert [int(r["n"]) for r in rows] == [400, 1600]
    e2e = [float(r["e2e_error_rate"]) for r in rows]
    assert e2e[0] > e2e[1]
    assert list(rows[0]) == [
        "n", "nprime", "trials", "traces", "bursts_total", "bursts_located",
        "recovered_traces", "recovery_rate", "misid_errors", "misid_rate",
        "false_alarms", "decode_errors", "e2e_errors", "e2e_error_rate",
        "eff_rate"]


def test_detect_seed_reproducible(tmp_path):
    res_a = run_cli("detect", DETECT_CFG, tmp_path, out="a", seed=17)
    res_b = run_cli("detect", DETECT_CFG, tmp_path, out="b", seed=17)
    assert res_a.returncode == 0 and res_b.returncode == 0
    assert (tmp_path / "a" / "detect.csv").read_bytes() == \
           (tmp_path / "b" / "detect.csv").read_bytes()


def test_detect_rejects_oversized_codebook(tmp_path):
    cfg = dict(DETECT_CFG, M=1 << 17)
    res = run_cli("detect", cfg, tmp_path)
    assert res.returncode == 2
    assert "M" in res.stderr


# ---------------------------------------------------------------------------
# config handling

def test_unknown_scenario_is_config_error(tmp_path):
    res = run_cli("design", dict(BUFFERS_CFG), tmp_path)
    assert res.returncode == 2
    assert "scenario" in res.stderr


def test_malformed_json_is_config_error(tmp_path):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text("{not json")
    res = subprocess.run(
        [sys.executable, "-m", "burstgic.cli", "buffers",
         "--config", str(cfg_path), "--out", str(tmp_path / "out")],
        capture_output=True, text=True)
    assert res.returncode == 2


def test_both_power_tags_rejected(tmp_path):
    cfg = dict(BUFFERS_CFG, user={"k": 2, "q": 0.3, "P": 1.0, "P_db": 0.0})
    res = run_cli("buffers", cfg, tmp_path)
    assert res.returncode == 2
    assert "not both" in res.stderr


def test_json_format_emits_json(tmp_path):
    res = run_cli("buffers", BUFFERS_CFG, tmp_path,
                  extra=("--format", "json"))
    assert res.returncode == 0, res.stderr
    rows = json.loads((tmp_path / "out" / "delay_gap.json").read_text())
    assert isinstance(rows, list) and rows
    assert set(rows[0]) == {"n", "j", "lag_freq", "trials"}
