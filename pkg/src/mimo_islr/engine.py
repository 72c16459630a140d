"""Cyclic coordinate descent over the waveform entries, plus Pareto sweeps in eta."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import metrics, solvers
from .coeffs import CoefficientBuilder
from .model import Constraint, ConstraintError, DegenerateError, RunConfig, WaveformSet, validate_config

log = logging.getLogger(__name__)

# grid used when an analytic update would ascend (should never trigger)
_FALLBACK_GRID = 401


def init_waveform(mt: int, n: int, l0: int = 8, seed: int = 0) -> WaveformSet:
    """Random MPSK matrix: entry ``exp(j 2 pi l / l0)`` with ``l`` uniform on 0..l0-1.

    Draws come from ``numpy.random.default_rng(seed)`` (PCG64), which is
    bitwise reproducible across platforms.
    """
    if l0 < 2:
        raise ConstraintError(f"initial alphabet size must be >= 2, got {l0}")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, l0, size=(mt, n))
    return WaveformSet(np.exp(2j * np.pi * idx / l0))


def initial_alphabet(cfg: RunConfig) -> int:
    """Alphabet for the seeded start: ``cfg.init_alphabet`` unless that is not a
    subset of the MPSK constraint alphabet, in which case the constraint's own."""
    L = cfg.constraint.alphabet_size
    if cfg.constraint.kind is Constraint.DISCRETE_PHASE and L % cfg.init_alphabet:
        return L
    return cfg.init_alphabet


@dataclass
class RunDiagnostics:
    fallbacks: int = 0
    wall_time: float = 0.0
    updates: int = 0
    debug_checks: int = 0


@dataclass
class RunRecord:
    history: list[tuple[int, float, float, float]]
    final: WaveformSet
    sweeps_used: int
    stop_reason: str
    initial_objective: float
    diagnostics: RunDiagnostics = field(default_factory=RunDiagnostics)

    @property
    def final_objective(self) -> float:
        return self.history[-1][1] if self.history else self.initial_objective

    @property
    def spatial_islr_db(self) -> float:
        return self.history[-1][2]

    @property
    def range_islr_db(self) -> float:
        return self.history[-1][3]


def _evaluate(s: np.ndarray, cfg: RunConfig) -> tuple[float, float, float]:
    """(f_o, spatial dB, range dB) from the direct metrics."""
    rg = metrics.range_islr(s)
    try:
        sp = metrics.spatial_islr(s, cfg.scenario)
    except DegenerateError:
        if cfg.eta > 0:
            raise
        sp = float("nan")
    f = rg if cfg.eta == 0 else cfg.eta * sp + (1 - cfg.eta) * rg
    return f, metrics.to_db(sp), metrics.to_db(rg)


def run(cfg: RunConfig, s0: WaveformSet | np.ndarray | None = None, *,
        debug: bool = False, refine: bool = True) -> RunRecord:
    """Minimize ``eta * spatial + (1 - eta) * range`` ISLR by cyclic coordinate descent.

    Entries are visited row by row, column by column.  After each full sweep
    the objective is evaluated directly and the run stops once the decrease
    is at most ``cfg.zeta``, when a sweep changes no entry (``stall``), or
    after ``cfg.max_sweeps`` sweeps.

    Args:
        cfg: run configuration; validated here.
        s0: starting waveform, which must satisfy the constraint.  Defaults to
            the seeded MPSK initializer.
        debug: re-check no-ascent on about 1% of updates with the direct
            metrics, and the constraint after every sweep.
        refine: passed to the C1/C2 solvers (see :func:`solvers.solve_energy`).
    """
    cfg = validate_config(cfg)
    if s0 is None:
        s0 = init_waveform(cfg.mt, cfg.n, initial_alphabet(cfg), cfg.seed)
    s = np.array(s0, dtype=complex)
    if s.shape != (cfg.mt, cfg.n):
        raise ConstraintError(f"initial waveform has shape {s.shape}, expected {(cfg.mt, cfg.n)}")
    if not cfg.constraint.is_feasible(s):
        raise ConstraintError(f"initial waveform violates the {cfg.constraint.kind.value} constraint")

    start = time.perf_counter()
    diag = RunDiagnostics()
    f_prev, _, _ = _evaluate(s, cfg)
    initial = f_prev
    builder = CoefficientBuilder(cfg.scenario, cfg.eta, cfg.constraint)
    check_rng = np.random.default_rng(cfg.seed ^ 0x5EED) if debug else None
    history: list[tuple[int, float, float, float]] = []
    reason = "max_sweeps"

    for sweep in range(1, cfg.max_sweeps + 1):
        changed = 0
        for t in range(cfg.mt):
            builder.start_row(s, t)
            for d in range(cfg.n):
                c = builder.entry(s, t, d)
                sol = _update(c, cfg, diag, refine)
                new = sol.entry
                if new != s[t, d]:
                    if check_rng is not None and check_rng.random() < 0.01:
                        _check_no_ascent(s, t, d, new, cfg)
                        diag.debug_checks += 1
                    s[t, d] = new
                    changed += 1
        diag.updates += cfg.mt * cfg.n
        f, sp_db, rg_db = _evaluate(s, cfg)
        history.append((sweep, f, sp_db, rg_db))
        log.debug("sweep %d: f=%.12g spatial=%.4f dB range=%.4f dB changed=%d",
                  sweep, f, sp_db, rg_db, changed)
        if debug and not cfg.constraint.is_feasible(s):
            raise AssertionError(f"constraint violated after sweep {sweep}")
        if changed == 0:
            reason = "stall"
            break
        if f_prev - f <= cfg.zeta:
            reason = "threshold"
            break
        f_prev = f

    diag.wall_time = time.perf_counter() - start
    return RunRecord(history, WaveformSet(s), len(history), reason, initial, diag)


def _update(c, cfg: RunConfig, diag: RunDiagnostics, refine: bool) -> solvers.PolarSolution:
    f_in = c.value(c.current)
    sol = solvers.solve(c, cfg.constraint, refine)
    if np.isfinite(sol.f_value) and sol.f_value <= f_in + 1e-12 * (1 + abs(f_in)):
        return sol
    diag.fallbacks += 1
    log.warning("analytic update ascended at (%d, %d); using grid fallback", c.t, c.d)
    sol = solvers.grid_oracle(c, cfg.constraint, _FALLBACK_GRID, _FALLBACK_GRID)
    if sol.f_value <= f_in:
        return sol
    return solvers.PolarSolution(c.r0, c.phi0, f_in)


def _check_no_ascent(s, t, d, new, cfg: RunConfig) -> None:
    before = metrics.weighted_objective(s, cfg.scenario, cfg.eta)
    trial = s.copy()
    trial[t, d] = new
    after = metrics.weighted_objective(trial, cfg.scenario, cfg.eta)
    if after > before + 1e-10:
        raise AssertionError(f"update at ({t}, {d}) raised f_o from {before!r} to {after!r}")


@dataclass
class ParetoPoint:
    eta: float
    spatial_islr_db: float
    range_islr_db: float
    record: RunRecord | None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def pareto_sweep(cfg: RunConfig, etas: Sequence[float], trials: int = 1,
                 **run_kwargs) -> list[ParetoPoint]:
    """Best-of-``trials`` run for each eta, seeds ``cfg.seed + i``.

    A failing eta is reported as a point with ``error`` set and NaN metrics;
    the sweep carries on with the remaining values.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    points = []
    for eta in sorted(float(e) for e in etas):
        try:
            best = None
            for i in range(trials):
                rec = run(cfg.with_(eta=eta, seed=cfg.seed + i), **run_kwargs)
                if best is None or rec.final_objective < best.final_objective:
                    best = rec
            points.append(ParetoPoint(eta, best.spatial_islr_db, best.range_islr_db, best))
        except (ValueError, ArithmeticError) as exc:
            log.error("pareto point eta=%g failed: %s", eta, exc)
            points.append(ParetoPoint(eta, float("nan"), float("nan"), None, str(exc)))
    return points
