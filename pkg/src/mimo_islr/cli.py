"""Batch front end: YAML scenario in, CSV/JSON results out.

Subcommands::

    python -m mimo_islr run CONFIG [--output-dir DIR]
    python -m mimo_islr pareto CONFIG [--output-dir DIR]
    python -m mimo_islr metrics WAVEFORM_CSV CONFIG [--output-dir DIR]

Exit codes are 0 on success, 2 for usage errors, 3 for configuration errors
and 4 for runtime failures.  Failures print a single ``error: kind: message``
line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import yaml

from . import engine, metrics
from .model import (AngleScenario, ConfigError, ConstraintSpec, RunConfig, WaveformSet,
                    validate_config)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3, 4

_CONSTRAINT_NAMES = {
    "energy": "energy", "c1": "energy",
    "par": "par", "c2": "par",
    "continuous_phase": "continuous_phase", "continuous": "continuous_phase", "c3": "continuous_phase",
    "discrete_phase": "discrete_phase", "discrete": "discrete_phase", "mpsk": "discrete_phase",
    "c4": "discrete_phase",
}
_KNOWN_KEYS = {"mt", "n", "constraint", "gamma_p_db", "alphabet_size", "eta", "zeta", "max_sweeps",
               "seed", "trials", "theta_d", "theta_u", "output_dir", "dt_over_lambda", "init_alphabet"}


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class ParsedConfig:
    """A config file mapped onto a :class:`RunConfig` plus sweep settings.

    ``etas`` is None for a scalar ``eta`` and the list otherwise.
    """

    run: RunConfig
    etas: list[float] | None = None
    trials: int = 1
    output_dir: Path = Path("output")
    raw: dict = field(default_factory=dict)

    @property
    def is_sweep(self) -> bool:
        return self.etas is not None


def _key_lines(text: str) -> dict[str, int]:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value if isinstance(k, yaml.ScalarNode)}


def parse_config(path: str | os.PathLike) -> ParsedConfig:
    """Read a YAML scenario file.

    Angle regions are ``[lo_deg, hi_deg, step_deg]`` triples; ``theta_d`` and
    ``theta_u`` take either one triple or a list of them.  Omitted regions
    default to the standard scenario (desired [-55, -35], undesired
    [-90, -60] and [-30, 90], 5 degree steps).

    Raises:
        ConfigError: malformed YAML, unknown or missing keys, or invalid
            values; the message carries ``path:line``.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror or exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}" if mark is not None else str(path)
        problem = getattr(exc, "problem", None) or str(exc).splitlines()[0]
        raise ConfigError(f"{where}: YAML parse error: {problem}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: config must be a mapping of keys to values")
    lines = _key_lines(text)

    def fail(key, msg):
        raise ConfigError(f"{path}:{lines.get(key, 1)}: {key}: {msg}")

    for key in data:
        if key not in _KNOWN_KEYS:
            fail(key, "unknown key")
    for key in ("mt", "n", "constraint", "eta"):
        if key not in data:
            raise ConfigError(f"{path}: missing required key '{key}'")

    def as_int(key, default=None):
        v = data.get(key, default)
        if isinstance(v, bool) or not isinstance(v, int):
            fail(key, f"expected an integer, got {v!r}")
        return v

    def as_float(key, v):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            fail(key, f"expected a number, got {v!r}")
        return float(v)

    mt, n = as_int("mt"), as_int("n")
    cname = _CONSTRAINT_NAMES.get(str(data["constraint"]).lower())
    if cname is None:
        fail("constraint", f"unknown constraint {data['constraint']!r}")
    if cname == "par":
        if "gamma_p_db" not in data:
            fail("constraint", "PAR constraint needs gamma_p_db")
        constraint = ConstraintSpec.par_db(as_float("gamma_p_db", data["gamma_p_db"]))
    elif cname == "discrete_phase":
        if "alphabet_size" not in data:
            fail("constraint", "discrete phase constraint needs alphabet_size")
        constraint = ConstraintSpec.discrete(as_int("alphabet_size"))
    elif cname == "energy":
        constraint = ConstraintSpec.energy()
    else:
        constraint = ConstraintSpec.continuous()

    eta_raw = data["eta"]
    if isinstance(eta_raw, list):
        if not eta_raw:
            fail("eta", "empty list")
        etas = [as_float("eta", e) for e in eta_raw]
        eta = etas[0]
    else:
        etas = None
        eta = as_float("eta", eta_raw)

    def regions(key, default):
        v = data.get(key, default)
        if isinstance(v, list) and v and not isinstance(v[0], list):
            v = [v]
        if not isinstance(v, list) or not v:
            fail(key, "expected [lo_deg, hi_deg, step_deg] or a list of such triples")
        out = []
        for tri in v:
            if not isinstance(tri, list) or len(tri) != 3:
                fail(key, f"expected a [lo_deg, hi_deg, step_deg] triple, got {tri!r}")
            out.append(tuple(as_float(key, x) for x in tri))
        return out

    td = regions("theta_d", [[-55, -35, 5]])
    tu = regions("theta_u", [[-90, -60, 5], [-30, 90, 5]])
    dtl = as_float("dt_over_lambda", data.get("dt_over_lambda", 0.5))
    trials = as_int("trials", 1)
    if trials < 1:
        fail("trials", "must be >= 1")
    try:
        scenario = AngleScenario.from_regions(td, tu, max(mt, 1), max(n, 2), dtl)
        cfg = RunConfig(mt=mt, n=n, scenario=scenario, constraint=constraint, eta=eta,
                        zeta=as_float("zeta", data.get("zeta", 1e-6)),
                        max_sweeps=as_int("max_sweeps", 1000), seed=as_int("seed", 0),
                        init_alphabet=as_int("init_alphabet", 8))
        cfg = validate_config(cfg)
        for e in etas or []:
            validate_config(cfg.with_(eta=e))
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    out_dir = Path(data.get("output_dir", "output"))
    if not out_dir.is_absolute():
        out_dir = path.parent / out_dir
    return ParsedConfig(cfg, etas, trials, out_dir, data)


# -- export ---------------------------------------------------------------------

def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _version() -> str:
    from . import __version__
    return __version__


def _config_echo(cfg: RunConfig) -> dict:
    c = cfg.constraint
    return {
        "mt": cfg.mt, "n": cfg.n, "constraint": c.kind.value,
        "gamma_p_db": None if c.gamma_p is None else float(10 * np.log10(c.gamma_p)),
        "alphabet_size": c.alphabet_size, "eta": cfg.eta, "zeta": cfg.zeta,
        "max_sweeps": cfg.max_sweeps, "seed": cfg.seed, "init_alphabet": cfg.init_alphabet,
        "theta_d_deg": [float(np.degrees(t)) for t in cfg.scenario.theta_d],
        "theta_u_deg": [float(np.degrees(t)) for t in cfg.scenario.theta_u],
        "dt_over_lambda": cfg.scenario.dt_over_lambda,
    }


def metrics_summary(s: np.ndarray, scenario: AngleScenario, eta: float | None) -> dict:
    sp = metrics.spatial_islr(s, scenario)
    rg = metrics.range_islr(s)
    out = {
        "spatial_islr": sp, "range_islr": rg,
        "spatial_islr_db": metrics.to_db(sp), "range_islr_db": metrics.to_db(rg),
    }
    if eta is not None:
        out["eta"] = eta
        out["objective"] = eta * sp + (1 - eta) * rg
    return out


def export(record: engine.RunRecord, scenario: AngleScenario, output_dir: str | os.PathLike,
           cfg: RunConfig | None = None) -> dict[str, Path]:
    """Write waveform, convergence, beampattern, correlation and metrics files.

    Each file is written to a temporary name and renamed into place, so a
    failure never leaves a truncated file behind.  Returns the paths by name.
    """
    out = Path(output_dir)
    s = np.asarray(record.final)
    mt, n = s.shape
    paths = {name: out / name for name in
             ("waveform.csv", "convergence.csv", "beampattern.csv", "correlation.csv", "metrics.json")}

    wave_rows = ((m, k, _fmt(s[m, k].real), _fmt(s[m, k].imag)) for m in range(mt) for k in range(n))
    _atomic_write(paths["waveform.csv"], _csv(("m", "n", "re", "im"), wave_rows))

    conv_rows = ((i, _fmt(f), _fmt(sp), _fmt(rg)) for i, f, sp, rg in record.history)
    _atomic_write(paths["convergence.csv"],
                  _csv(("sweep", "f_o", "spatial_islr_db", "range_islr_db"), conv_rows))

    theta = np.arange(-180, 181) * 0.5
    p = metrics.beampattern(s, np.radians(theta), scenario.dt_over_lambda)
    bp_rows = ((_fmt(t), _fmt(v), _fmt(metrics.to_db(v))) for t, v in zip(theta, p))
    _atomic_write(paths["beampattern.csv"], _csv(("theta_deg", "P_linear", "P_db"), bp_rows))

    r = np.abs(metrics.correlations(s))
    lags = np.arange(-(n - 1), n)
    corr_rows = ((m, l, int(k), _fmt(r[m, l, i])) for m in range(mt) for l in range(mt)
                 for i, k in enumerate(lags))
    _atomic_write(paths["correlation.csv"], _csv(("m", "l", "k", "abs_r"), corr_rows))

    eta = cfg.eta if cfg is not None else None
    summary = metrics_summary(s, scenario, eta)
    summary.update({
        "stop_reason": record.stop_reason, "sweeps": record.sweeps_used,
        "fallbacks": record.diagnostics.fallbacks, "wall_time_s": record.diagnostics.wall_time,
        "config": _config_echo(cfg) if cfg is not None else None,
        "version": _version(),
    })
    _atomic_write(paths["metrics.json"], json.dumps(summary, indent=2, allow_nan=True) + "\n")
    return paths


def read_waveform_csv(path: str | os.PathLike) -> WaveformSet:
    """Inverse of the waveform.csv export."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read waveform: {exc.strerror or exc}") from exc
    if not rows or set(rows[0]) != {"m", "n", "re", "im"}:
        raise ConfigError(f"{path}: expected columns m,n,re,im")
    try:
        idx = np.array([(int(r["m"]), int(r["n"])) for r in rows])
        val = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed row: {exc}") from exc
    if idx.min() < 0:
        raise ConfigError(f"{path}: negative index")
    shape = tuple(idx.max(axis=0) + 1)
    s = np.full(shape, np.nan, dtype=complex)
    s[idx[:, 0], idx[:, 1]] = val
    if np.isnan(s.real).any():
        raise ConfigError(f"{path}: waveform table has missing entries")
    return WaveformSet(s)


# -- commands -------------------------------------------------------------------

def _cmd_run(args) -> int:
    pc = parse_config(args.config)
    if pc.is_sweep:
        raise ConfigError(f"{args.config}: eta is a list; use the 'pareto' subcommand")
    out = Path(args.output_dir) if args.output_dir else pc.output_dir
    rec = engine.run(pc.run)
    export(rec, pc.run.scenario, out, pc.run)
    print(f"{rec.stop_reason} after {rec.sweeps_used} sweeps: spatial {rec.spatial_islr_db:.4f} dB, "
          f"range {rec.range_islr_db:.4f} dB -> {out}")
    return EXIT_OK


def _cmd_pareto(args) -> int:
    pc = parse_config(args.config)
    out = Path(args.output_dir) if args.output_dir else pc.output_dir
    etas = pc.etas if pc.is_sweep else [pc.run.eta]
    points = engine.pareto_sweep(pc.run, etas, pc.trials)
    for p in points:
        if p.record is not None:
            export(p.record, pc.run.scenario, out / f"eta_{p.eta:g}", pc.run.with_(eta=p.eta))
    rows = ((_fmt(p.eta), _fmt(p.spatial_islr_db), _fmt(p.range_islr_db)) for p in points)
    _atomic_write(out / "pareto.csv", _csv(("eta", "spatial_islr_db", "range_islr_db"), rows))
    failed = [p for p in points if p.failed]
    for p in points:
        print(f"eta={p.eta:g}: spatial {p.spatial_islr_db:.4f} dB, range {p.range_islr_db:.4f} dB")
    if failed:
        print(f"error: runtime: {len(failed)} pareto point(s) failed: {failed[0].error}",
              file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_metrics(args) -> int:
    pc = parse_config(args.config)
    s = np.asarray(read_waveform_csv(args.waveform))
    if s.shape != (pc.run.mt, pc.run.n):
        raise ConfigError(f"waveform shape {s.shape} does not match config mt={pc.run.mt}, n={pc.run.n}")
    summary = metrics_summary(s, pc.run.scenario, None if pc.is_sweep else pc.run.eta)
    summary["version"] = _version()
    text = json.dumps(summary, indent=2) + "\n"
    if args.output_dir:
        _atomic_write(Path(args.output_dir) / "metrics.json", text)
    print(text, end="")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: usage: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mimo_islr", description="MIMO radar waveform design by coordinate descent.")
    p.add_argument("-v", "--verbose", action="store_true", help="log per-sweep progress")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="single optimization run")
    r.add_argument("config")
    r.add_argument("--output-dir")
    r.set_defaults(func=_cmd_run)
    s = sub.add_parser("pareto", help="sweep over a list of eta values")
    s.add_argument("config")
    s.add_argument("--output-dir")
    s.set_defaults(func=_cmd_pareto)
    m = sub.add_parser("metrics", help="evaluate an exported waveform")
    m.add_argument("waveform")
    m.add_argument("config")
    m.add_argument("--output-dir")
    m.set_defaults(func=_cmd_metrics)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: config: {_one_line(exc)}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, OSError, ValueError, RuntimeError) as exc:
        print(f"error: runtime: {_one_line(exc)}", file=sys.stderr)
        return EXIT_RUNTIME


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split())
