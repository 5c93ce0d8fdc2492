"""Command-line dataset emitters for the package's experiment modules.

Four subcommands (buffers, design, region, detect) read a JSON config,
run the corresponding module, and write CSV or JSON datasets into an
output directory. No plotting here: the outputs are the datasets a
notebook or plotting script would consume.

Power-like config fields accept either linear or dB with an explicit
suffix tag: write "P": 100.0 or "P_db": 20.0 (never both). Conversion
happens only at this boundary; everything downstream is linear.

Exit codes: 0 success, 2 config error, 3 infeasible scenario.
"""

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from burstgic.arrivals import (
    ResonanceError,
    delay_gap_experiment,
    immediacy_violation_freq,
)
from burstgic.design import (
    InfeasibleDesignError,
    active_set,
    admissible_alpha,
    d_max,
    inadmissible_alpha,
    optimize_N,
    outage_curve,
    please1_holds,
)
from burstgic.detection import DetectionConfig, detection_experiment
from burstgic.model import UserParams
from burstgic.region import rbar_c, region, sym_curves, sym_region

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3

SCENARIOS = {
    "buffers": ("buffers",),
    "design": ("design",),
    "region": ("grid", "symmetric"),
    "detect": ("detect",),
}


class ConfigError(ValueError):
    """Malformed or out-of-range configuration (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    params: dict
    out: Path
    seed: int
    fmt: str


# ---------------------------------------------------------------------------
# config plumbing

def _load_config(command: str, args) -> RunConfig:
    try:
        raw = json.loads(Path(args.config).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS[command]:
        raise ConfigError(
            f"unknown scenario {scenario!r} for {command}; "
            f"expected one of {SCENARIOS[command]}")
    out = Path(args.out if args.out is not None else raw.get("out", "."))
    seed = args.seed if args.seed is not None else int(raw.get("seed", 0))
    fmt = args.format if args.format is not None else raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    return RunConfig(scenario=scenario, params=raw, out=out, seed=seed,
                     fmt=fmt)


def _need(params: dict, key: str):
    if key not in params:
        raise ConfigError(f"missing required field {key!r}")
    return params[key]


def _number(params: dict, key: str, default=None) -> float:
    val = params.get(key, default)
    if val is None:
        raise ConfigError(f"missing required field {key!r}")
    try:
        return float(val)
    except (TypeError, ValueError):
        raise ConfigError(f"field {key!r} must be a number, got {val!r}")


def _power(params: dict, key: str, default=None) -> float:
    """Linear power from `key` or `key_db` (exactly one may be present)."""
    lin, db = params.get(key), params.get(key + "_db")
    if lin is not None and db is not None:
        raise ConfigError(f"give {key} or {key}_db, not both")
    if lin is None and db is None:
        if default is None:
            raise ConfigError(f"missing power field {key} (or {key}_db)")
        return default
    return float(lin) if lin is not None else 10.0 ** (float(db) / 10.0)


def _user(params: dict, key: str) -> UserParams:
    spec = params.get(key)
    if not isinstance(spec, dict):
        raise ConfigError(f"missing user block {key!r}")
    try:
        return UserParams(k=int(_need(spec, "k")),
                          q=float(_need(spec, "q")),
                          P=_power(spec, "P", default=1.0),
                          a=float(spec.get("a", 0.0)))
    except ValueError as e:
        raise ConfigError(f"{key}: {e}")


def _rate(params: dict, key: str, u: UserParams) -> float:
    """Target rate, absolute (`R1`) or as a multiple of lambda
    (`R1_over_lambda`)."""
    absolute, rel = params.get(key), params.get(key + "_over_lambda")
    if (absolute is None) == (rel is None):
        raise ConfigError(f"give exactly one of {key} or {key}_over_lambda")
    return float(absolute) if absolute is not None else float(rel) * u.lam


def _d_values(params: dict) -> list:
    if "ds" in params:
        return [float(d) for d in params["ds"]]
    grid = params.get("d_grid")
    if not (isinstance(grid, (list, tuple)) and len(grid) == 3):
        raise ConfigError("give ds (list) or d_grid ([start, stop, count])")
    start, stop, count = float(grid[0]), float(grid[1]), int(grid[2])
    if count < 2 or stop <= start:
        raise ConfigError("d_grid needs stop > start and count >= 2")
    return [float(d) for d in np.linspace(start, stop, count)]


# ---------------------------------------------------------------------------
# emitters

def _emit(rows: list, header: tuple, base: Path, fmt: str) -> Path:
    """Write rows (dicts sharing `header` keys) as CSV or JSON."""
    if fmt == "csv":
        path = base.with_suffix(".csv")
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([row[k] for k in header])
    else:
        path = base.with_suffix(".json")
        path.write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
    return path


def _write_json(obj, path: Path) -> Path:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _intervals(iu) -> list:
    return [[float(lo), float(hi)] for lo, hi in iu.intervals]


def _finite(x: float):
    """JSON-safe float: math.inf becomes the string "inf"."""
    return "inf" if math.isinf(x) else float(x)


# ---------------------------------------------------------------------------
# commands

def cmd_buffers(rc: RunConfig) -> list:
    p = rc.params
    u = _user(p, "user")
    n_values = [int(n) for n in _need(p, "n_values")]
    N = int(_number(p, "N"))
    theta = _number(p, "theta")
    delta = _number(p, "delta")
    trials = int(_number(p, "trials", 200))
    nprime = p.get("nprime")
    nprime = int(nprime) if nprime is not None else None
    gap_rows = []
    imm_rows = []
    for n in n_values:
        freqs = delay_gap_experiment(u, n, N, theta, delta, trials, rc.seed)
        for j, f in enumerate(freqs, start=1):
            gap_rows.append({"n": n, "j": j, "lag_freq": float(f),
                             "trials": trials})
        if N >= 2:
            imm = immediacy_violation_freq(u, n, N, nprime, theta, trials,
                                           rc.seed)
            imm_rows.append({"n": n, "violation_freq": float(imm),
                             "trials": trials})
    files = [
        _emit(gap_rows, ("n", "j", "lag_freq", "trials"),
              rc.out / "delay_gap", rc.fmt),
        _emit(imm_rows, ("n", "violation_freq", "trials"),
              rc.out / "immediacy", rc.fmt),
    ]
    return files


def cmd_design(rc: RunConfig) -> list:
    p = rc.params
    u1, u2 = _user(p, "user1"), _user(p, "user2")
    R1, R2 = _rate(p, "R1", u1), _rate(p, "R2", u2)
    ds = _d_values(p)
    act = sorted(active_set(u1, u2, R1, R2))
    if not act:
        raise InfeasibleDesignError(
            f"active set is empty at R1={R1}, R2={R2}")
    reliable = not please1_holds(u1, u2, R1, R2)
    files = []
    pairs = {}
    summary = {"scenario": rc.scenario, "R1": R1, "R2": R2,
               "active_set": [list(nn) for nn in act],
               "always_reliable": reliable, "d_max": {}}
    if reliable:
        # every offset decodes; emit empty curves so the files exist
        print("ALWAYS_RELIABLE: both loads are below the interference-free "
              "threshold, offsets cannot cause outage")
        for N1, N2 in act:
            files.append(_emit([], ("N1", "N2", "d", "outage"),
                               rc.out / f"outage_N{N1}_{N2}", rc.fmt))
            summary["d_max"][f"{N1},{N2}"] = "inf"
            pairs[f"{N1},{N2}"] = {"admissible": "all", "inadmissible": [],
                                   "d_max": "inf"}
    else:
        opt_rows = []
        for N1, N2 in act:
            curve = outage_curve(u1, u2, N1, N2, R1, R2, ds)
            rows = [{"N1": N1, "N2": N2, "d": d, "outage": float(o)}
                    for d, o in curve.samples]
            files.append(_emit(rows, ("N1", "N2", "d", "outage"),
                               rc.out / f"outage_N{N1}_{N2}", rc.fmt))
            dm = d_max(u1, u2, N1, N2, R1, R2)
            summary["d_max"][f"{N1},{N2}"] = _finite(dm)
            pairs[f"{N1},{N2}"] = {
                "admissible": _intervals(admissible_alpha(u1, u2, N1, N2,
                                                          R1, R2)),
                "inadmissible": _intervals(inadmissible_alpha(u1, u2, N1, N2,
                                                              R1, R2)),
                "d_max": _finite(dm),
            }
        for d in ds:
            (b1, b2), table = optimize_N(u1, u2, R1, R2, d)
            opt_rows.append({"d": d, "N1": b1, "N2": b2,
                             "outage": float(table[(b1, b2)])})
        files.append(_emit(opt_rows, ("d", "N1", "N2", "outage"),
                           rc.out / "optimal", rc.fmt))
    files.append(_write_json({"pairs": pairs},
                             rc.out / "admissible_alpha.json"))
    files.append(_write_json(summary, rc.out / "summary.json"))
    return files


def cmd_region(rc: RunConfig) -> list:
    if rc.scenario == "grid":
        return _region_grid(rc)
    return _region_symmetric(rc)


def _region_grid(rc: RunConfig) -> list:
    p = rc.params
    u1, u2 = _user(p, "user1"), _user(p, "user2")
    N1, N2 = int(_number(p, "N1")), int(_number(p, "N2"))
    theta1, theta2 = _number(p, "theta1"), _number(p, "theta2")
    alpha = _number(p, "alpha")
    m_grid = int(_number(p, "m_grid", 10))
    resolution = p.get("resolution")
    try:
        reg = region(u1, u2, N1, N2, theta1, theta2, alpha, m_grid,
                     float(resolution) if resolution is not None else None)
    except ValueError as e:
        raise ConfigError(str(e))
    rows = []
    xs, ys = reg.xs(), reg.ys()
    for ix, x in enumerate(xs):
        for iy, y in enumerate(ys):
            rows.append({"R_c1": float(x), "R_c2": float(y),
                         "member": int(reg.mask[ix, iy])})
    meta = {
        "scenario": rc.scenario,
        "box": [reg.x0, reg.x1, reg.y0, reg.y1],
        "cell": [reg.cell[0], reg.cell[1]],
        "rbar_c1": rbar_c(u1, N1),
        "rbar_c2": rbar_c(u2, N2),
        "m_grid": m_grid,
        "alpha": alpha,
    }
    return [
        _emit(rows, ("R_c1", "R_c2", "member"), rc.out / "region_points",
              rc.fmt),
        _write_json(meta, rc.out / "region_meta.json"),
    ]


def _region_symmetric(rc: RunConfig) -> list:
    p = rc.params
    N = int(_number(p, "N"))
    theta = _number(p, "theta")
    if "lam" in p:
        lam = _number(p, "lam")
    else:
        lam = int(_number(p, "k")) * _number(p, "q")
    a = _number(p, "a")
    P = _power(p, "P")
    alpha = _number(p, "alpha")
    n_gamma = int(_number(p, "n_gamma", 2048))
    try:
        intervals = sym_region(N, theta, lam, a, P, alpha, n_gamma).intervals
    except ValueError as e:
        raise ConfigError(str(e))
    meta = {"scenario": rc.scenario, "N": N, "theta": theta, "lam": lam,
            "a": a, "P": P, "alpha": alpha,
            "intervals": [[lo, hi] for lo, hi in intervals]}
    curves = sym_curves(N, theta, lam, a, P, alpha) \
        if N >= 2 and alpha < theta else None
    if curves is not None:
        meta["gamma0"] = curves.gamma0
        meta["gamma1"] = _finite(curves.gamma1)
        meta["gamma2"] = _finite(curves.gamma2)
        meta["branch_low"] = curves.branch_low
    files = [_write_json(meta, rc.out / "sym_intervals.json")]
    if curves is not None:
        c = curves
        hi_max = max((hi for _, hi in intervals), default=lam)
        g_max = (1.0 / N + 1.05 * hi_max / lam) * P
        points = int(_number(p, "curve_points", 256))
        rows = []
        for g in np.linspace(g_max / points, g_max, points):
            rows.append({"gamma": float(g), "f": float(c.f(g)),
                         "g": float(c.g(g)),
                         "power_line": float(c.power_line(g))})
        files.append(_emit(rows, ("gamma", "f", "g", "power_line"),
                           rc.out / "sym_curves", rc.fmt))
    return files


def cmd_detect(rc: RunConfig) -> list:
    p = rc.params
    nprime_values = p.get("nprime_values")
    try:
        cfg = DetectionConfig(
            n_values=tuple(int(n) for n in _need(p, "n_values")),
            gamma1=_power(p, "gamma1"),
            gamma2=_power(p, "gamma2"),
            a1=_number(p, "a1"),
            a2=_number(p, "a2"),
            eps=_number(p, "eps"),
            M=int(_number(p, "M")),
            nprime_values=(tuple(int(m) for m in nprime_values)
                           if nprime_values is not None else None),
        )
    except ValueError as e:
        raise ConfigError(str(e))
    trials = int(_number(p, "trials", 200))
    rows = detection_experiment(cfg, trials, rc.seed)
    out = []
    for r in rows:
        out.append({
            "n": r.n, "nprime": r.nprime, "trials": r.trials,
            "traces": r.traces, "bursts_total": r.bursts_total,
            "bursts_located": r.bursts_located,
            "recovered_traces": r.recovered_traces,
            "recovery_rate": r.recovery_rate,
            "misid_errors": r.misid_errors,
            "misid_rate": r.misid_rate,
            "false_alarms": r.false_alarms,
            "decode_errors": r.decode_errors,
            "e2e_errors": r.e2e_errors,
            "e2e_error_rate": r.e2e_error_rate,
            "eff_rate": r.eff_rate,
        })
    header = ("n", "nprime", "trials", "traces", "bursts_total",
              "bursts_located", "recovered_traces", "recovery_rate",
              "misid_errors", "misid_rate", "false_alarms", "decode_errors",
              "e2e_errors", "e2e_error_rate", "eff_rate")
    return [_emit(out, header, rc.out / "detect", rc.fmt)]


# ---------------------------------------------------------------------------
# entry point

COMMANDS = {
    "buffers": cmd_buffers,
    "design": cmd_design,
    "region": cmd_region,
    "detect": cmd_detect,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="burstgic",
        description="dataset emitters for the bursty interference toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON config path")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--format", choices=("csv", "json"), default=None)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        rc = _load_config(args.command, args)
        rc.out.mkdir(parents=True, exist_ok=True)
        files = COMMANDS[args.command](rc)
    except (ResonanceError, InfeasibleDesignError) as e:
        print(f"infeasible scenario: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConfigError, ValueError, KeyError, TypeError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    for path in files:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
