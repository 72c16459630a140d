"""Domain types shared by the metric, coefficient, solver and engine modules."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np


class ConfigError(ValueError):
    """Base class for invalid user-supplied configuration."""


class DimensionError(ConfigError):
    pass


class ConstraintError(ConfigError):
    pass


class ScenarioError(ConfigError):
    pass


class DegenerateError(ArithmeticError):
    """A ratio metric has a (numerically) zero denominator."""


# Angles closer than this (radians) are treated as the same grid point.
_ANGLE_DEDUP = 1e-9


@dataclass(frozen=True)
class WaveformSet:
    """Complex ``mt x n`` matrix of transmit sequences (rows are antennas).

    Behaves as an array through ``np.asarray(ws)``; the stored matrix is a
    read-only copy so instances can be shared freely.
    """

    entries: np.ndarray

    def __post_init__(self):
        s = np.array(self.entries, dtype=complex, copy=True)
        if s.ndim != 2:
            raise DimensionError(f"waveform must be 2-D, got shape {s.shape}")
        if s.shape[0] < 1 or s.shape[1] < 2:
            raise DimensionError(f"need mt >= 1 and n >= 2, got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise DimensionError("waveform has non-finite entries")
        s.setflags(write=False)
        object.__setattr__(self, "entries", s)

    @property
    def mt(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def energy(self) -> float:
        return float(np.vdot(self.entries, self.entries).real)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)


def expand_region(lo_deg: float, hi_deg: float, step_deg: float) -> np.ndarray:
    """Expand ``[lo, hi]`` with spacing ``step`` into a degree grid, both ends included."""
    if step_deg <= 0:
        raise ScenarioError(f"angle step must be positive, got {step_deg}")
    if hi_deg < lo_deg:
        raise ScenarioError(f"empty angular region [{lo_deg}, {hi_deg}]")
    count = int(np.floor((hi_deg - lo_deg) / step_deg + 1e-9)) + 1
    grid = lo_deg + step_deg * np.arange(count)
    if hi_deg - grid[-1] > 1e-9 * max(1.0, abs(hi_deg)):
        grid = np.append(grid, hi_deg)
    return grid


def _dedup_sorted(theta: Iterable[float]) -> tuple[float, ...]:
    values = np.sort(np.asarray(list(theta), dtype=float))
    out: list[float] = []
    for v in values:
        if not out or v - out[-1] > _ANGLE_DEDUP:
            out.append(float(v))
    return tuple(out)


def _averaged_outer(theta: Sequence[float], mt: int, n: int, dt_over_lambda: float) -> np.ndarray:
    k = np.arange(mt)
    acc = np.zeros((mt, mt), dtype=complex)
    # fixed summation order keeps the result bitwise reproducible
    for th in theta:
        a = np.exp(2j * np.pi * dt_over_lambda * k * np.sin(th))
        acc += np.outer(a, a.conj())
    return acc / (n * len(theta))


@dataclass(frozen=True)
class AngleScenario:
    """Desired / undesired angle sets with the averaged steering matrices.

    ``a_d`` is ``sum_r a(theta_r) a(theta_r)^H / (n * M_d)`` over the desired
    angles and ``a_u`` the same over the undesired ones.  Angles are radians.
    """

    theta_d: tuple[float, ...]
    theta_u: tuple[float, ...]
    mt: int
    n: int
    dt_over_lambda: float = 0.5
    a_d: np.ndarray = field(init=False, repr=False, compare=False)
    a_u: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        td = _dedup_sorted(self.theta_d)
        tu = _dedup_sorted(self.theta_u)
        if not td or not tu:
            raise ScenarioError("desired and undesired angle sets must be non-empty")
        if self.mt < 1 or self.n < 2:
            raise DimensionError(f"need mt >= 1 and n >= 2, got mt={self.mt}, n={self.n}")
        if not self.dt_over_lambda > 0:
            raise ScenarioError("dt_over_lambda must be positive")
        for a in td:
            if np.any(np.abs(np.asarray(tu) - a) <= _ANGLE_DEDUP):
                raise ScenarioError(
                    f"angle {np.degrees(a):.6g} deg is both desired and undesired")
        object.__setattr__(self, "theta_d", td)
        object.__setattr__(self, "theta_u", tu)
        ad = _averaged_outer(td, self.mt, self.n, self.dt_over_lambda)
        au = _averaged_outer(tu, self.mt, self.n, self.dt_over_lambda)
        ad.setflags(write=False)
        au.setflags(write=False)
        object.__setattr__(self, "a_d", ad)
        object.__setattr__(self, "a_u", au)

    @classmethod
    def from_regions(cls, desired: Sequence[Sequence[float]], undesired: Sequence[Sequence[float]],
                     mt: int, n: int, dt_over_lambda: float = 0.5) -> "AngleScenario":
        """Build from ``[lo_deg, hi_deg, step_deg]`` triples (each list may hold several)."""
        td = np.concatenate([expand_region(*r) for r in desired]) if desired else []
        tu = np.concatenate([expand_region(*r) for r in undesired]) if undesired else []
        return cls(tuple(np.radians(td)), tuple(np.radians(tu)), mt, n, dt_over_lambda)

    @classmethod
    def default_scene(cls, mt: int = 8, n: int = 64) -> "AngleScenario":
        """Desired [-55, -35] deg, undesired [-90, -60] and [-30, 90] deg, 5 deg grid."""
        return cls.from_regions([(-55, -35, 5)], [(-90, -60, 5), (-30, 90, 5)], mt, n)

    def resized(self, mt: int, n: int) -> "AngleScenario":
        return AngleScenario(self.theta_d, self.theta_u, mt, n, self.dt_over_lambda)


class Constraint(enum.Enum):
    ENERGY = "energy"
    PAR = "par"
    CONTINUOUS_PHASE = "continuous_phase"
    DISCRETE_PHASE = "discrete_phase"


@dataclass(frozen=True)
class ConstraintSpec:
    """Feasible set for the waveform entries.

    ``gamma_p`` is the linear peak-to-average power bound (PAR only) and
    ``alphabet_size`` the number of MPSK phases (discrete phase only).
    """

    kind: Constraint
    gamma_p: float | None = None
    alphabet_size: int | None = None

    @classmethod
    def energy(cls) -> "ConstraintSpec":
        return cls(Constraint.ENERGY)

    @classmethod
    def par(cls, gamma_p: float) -> "ConstraintSpec":
        return cls(Constraint.PAR, gamma_p=float(gamma_p))

    @classmethod
    def par_db(cls, gamma_p_db: float) -> "ConstraintSpec":
        return cls(Constraint.PAR, gamma_p=float(10.0 ** (gamma_p_db / 10.0)))

    @classmethod
    def continuous(cls) -> "ConstraintSpec":
        return cls(Constraint.CONTINUOUS_PHASE)

    @classmethod
    def discrete(cls, alphabet_size: int) -> "ConstraintSpec":
        return cls(Constraint.DISCRETE_PHASE, alphabet_size=int(alphabet_size))

    @property
    def unimodular(self) -> bool:
        return self.kind in (Constraint.CONTINUOUS_PHASE, Constraint.DISCRETE_PHASE)

    def check(self, mt: int, n: int) -> None:
        if self.kind is Constraint.PAR:
            if self.gamma_p is None or not np.isfinite(self.gamma_p):
                raise ConstraintError("PAR constraint needs gamma_p")
            if self.gamma_p < 1.0:
                raise ConstraintError(f"gamma_p must be >= 1, got {self.gamma_p}")
            if self.gamma_p >= mt * n:
                raise ConstraintError(f"gamma_p must be < Mt·N = {mt * n}, got {self.gamma_p}")
        elif self.kind is Constraint.DISCRETE_PHASE:
            if self.alphabet_size is None or self.alphabet_size < 2:
                raise ConstraintError(f"alphabet size L must be >= 2, got {self.alphabet_size}")

    def is_feasible(self, s, tol: float = 1e-9) -> bool:
        """Check ``s`` against the full-matrix form of the constraint."""
        s = np.asarray(s)
        mt, n = s.shape
        power = np.abs(s) ** 2
        total = power.sum()
        if self.kind is Constraint.ENERGY:
            return 0 < total <= mt * n * (1 + tol)
        if self.kind is Constraint.PAR:
            if not 0 < total <= mt * n * (1 + tol):
                return False
            return mt * n * power.max() <= self.gamma_p * total * (1 + tol)
        if not np.allclose(np.abs(s), 1.0, rtol=0, atol=tol):
            return False
        if self.kind is Constraint.DISCRETE_PHASE:
            idx = np.angle(s) * self.alphabet_size / (2 * np.pi)
            return bool(np.all(np.abs(idx - np.round(idx)) <= 1e-6))
        return True


@dataclass(frozen=True)
class RunConfig:
    mt: int
    n: int
    scenario: AngleScenario
    constraint: ConstraintSpec
    eta: float
    zeta: float = 1e-6
    max_sweeps: int = 1000
    seed: int = 0
    init_alphabet: int = 8

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)


def validate_config(cfg: RunConfig) -> RunConfig:
    """Check every invariant of ``cfg`` and return a normalized copy.

    The returned config carries a scenario sized to ``(mt, n)`` so that the
    steering matrices use the right normalization.
    """
    if int(cfg.mt) != cfg.mt or cfg.mt < 1:
        raise DimensionError(f"mt must be a positive integer, got {cfg.mt}")
    if int(cfg.n) != cfg.n or cfg.n < 2:
        raise DimensionError(f"n must be an integer >= 2, got {cfg.n}")
    if not 0.0 <= cfg.eta <= 1.0:
        raise ConfigError(f"eta out of [0,1]: {cfg.eta}")
    if not cfg.zeta > 0:
        raise ConfigError(f"zeta must be > 0, got {cfg.zeta}")
    if cfg.max_sweeps < 1:
        raise ConfigError(f"max_sweeps must be >= 1, got {cfg.max_sweeps}")
    if not 0 <= cfg.seed < 2 ** 64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {cfg.seed}")
    if cfg.init_alphabet < 2:
        raise ConstraintError(f"init_alphabet must be >= 2, got {cfg.init_alphabet}")
    cfg.constraint.check(cfg.mt, cfg.n)
    scenario = cfg.scenario
    if scenario.mt != cfg.mt or scenario.n != cfg.n:
        scenario = scenario.resized(int(cfg.mt), int(cfg.n))
    return replace(cfg, mt=int(cfg.mt), n=int(cfg.n), scenario=scenario,
                   max_sweeps=int(cfg.max_sweeps), seed=int(cfg.seed))
