"""Closed-form coefficients of the objective as a function of one entry.

With every entry of ``S`` fixed except ``s[t, d] = v`` the objective is

    eta * (2Re{a0 v} + a1 + a3|v|^2) / (2Re{b0 v} + b1 + b3|v|^2)
      + (1 - eta) * (2Re{c0 v^2} + 2Re{c1 v} + c2 + c5|v|^2) / (|v|^4 + d1|v|^2 + d2)

and the constraint on ``|v|^2`` reduces to the bounds gamma_e (energy) and
gamma_l, gamma_u (PAR).  Indices ``t`` and ``d`` are zero-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from . import metrics
from .model import AngleScenario, Constraint, ConstraintSpec


@dataclass(frozen=True)
class EntryCoefficients:
    t: int
    d: int
    eta: float
    current: complex
    a0: complex
    a1: float
    a3: float
    b0: complex
    b1: float
    b3: float
    c0: complex
    c1: complex
    c2: float
    c5: float
    d1: float
    d2: float
    gamma_e: float
    gamma_l: float = float("nan")
    gamma_u: float = float("nan")

    # -- pieces of the reconstructed objective -------------------------------
    def spatial_terms(self, v):
        v = np.asarray(v, dtype=complex)
        p = np.abs(v) ** 2
        num = 2 * (self.a0 * v).real + self.a1 + self.a3 * p
        den = 2 * (self.b0 * v).real + self.b1 + self.b3 * p
        return num, den

    def range_terms(self, v):
        v = np.asarray(v, dtype=complex)
        p = np.abs(v) ** 2
        num = 2 * (self.c0 * v * v).real + 2 * (self.c1 * v).real + self.c2 + self.c5 * p
        den = p * p + self.d1 * p + self.d2
        return num, den

    def value(self, v):
        """Objective with the entry set to ``v`` (vectorized; inf where undefined)."""
        v = np.asarray(v, dtype=complex)
        out = np.zeros(v.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.eta > 0:
                num, den = self.spatial_terms(v)
                out = out + self.eta * np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)
            if self.eta < 1:
                num, den = self.range_terms(v)
                out = out + (1 - self.eta) * np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)
        if out.ndim == 0:
            return float(out)
        return out

    def value_polar(self, r, phi):
        return self.value(np.asarray(r) * np.exp(1j * np.asarray(phi)))

    @property
    def r0(self) -> float:
        return abs(self.current)

    @property
    def phi0(self) -> float:
        """Phase of the incoming entry; zero for a (numerically) zero entry."""
        if abs(self.current) < 1e-12:
            return 0.0
        return float(np.angle(self.current))


class CoefficientBuilder:
    """Computes :class:`EntryCoefficients` for successive entries of one row.

    Quantities that depend only on the rows other than ``t`` (their spectra,
    energies, and the correlation sidelobes among themselves) are cached by
    :meth:`start_row`; everything involving row ``t`` is recomputed on every
    :meth:`entry` call, so the caller may freely overwrite row ``t`` between
    calls but must call :meth:`start_row` again before touching other rows.
    """

    def __init__(self, scenario: AngleScenario | None, eta: float,
                 constraint: ConstraintSpec | None = None):
        self.scenario = scenario
        self.eta = float(eta)
        self.constraint = constraint
        self._t = None

    def start_row(self, s: np.ndarray, t: int) -> None:
        s = np.asarray(s, dtype=complex)
        mt, n = s.shape
        if not 0 <= t < mt:
            raise IndexError(f"row {t} out of range for mt={mt}")
        self._t = t
        self._shape = (mt, n)
        self._nfft = sfft.next_fast_len(2 * n - 1)
        lags = np.arange(-(n - 1), n)
        self._neg_lag = (-lags) % self._nfft
        self._spectra = sfft.fft(s, self._nfft, axis=1)
        self._padded = np.pad(s, ((0, 0), (n - 1, n - 1)))
        power = np.abs(s) ** 2
        rows = power.sum(axis=1)
        others = np.ones(mt, dtype=bool)
        others[t] = False
        self._other_energy = float(rows[others].sum())
        self._other_row4 = float(np.sum(rows[others] ** 2))
        self._other_peak = float(power[others].max()) if mt > 1 else 0.0
        zeroed = s.copy()
        zeroed[t] = 0
        # sidelobes among rows != t; the zero row contributes nothing
        self._gamma_t = metrics.range_isl(zeroed) if mt > 1 else 0.0

    def entry(self, s: np.ndarray, t: int, d: int) -> EntryCoefficients:
        if t != self._t:
            raise RuntimeError("start_row must be called for this row first")
        s = np.asarray(s, dtype=complex)
        mt, n = self._shape
        if not 0 <= d < n:
            raise IndexError(f"column {d} out of range for n={n}")
        v = complex(s[t, d])
        x = s[t].copy()
        x[d] = 0
        ex = float(np.vdot(x, x).real)
        rng = self._range(x, t, d, ex)
        spa = self._spatial(s, t, d)
        others = ex + self._other_energy
        gamma_e = max(mt * n - others, 0.0)
        gamma_l = gamma_u = float("nan")
        if self.constraint is not None and self.constraint.kind is Constraint.PAR:
            gp = self.constraint.gamma_p
            peak = max(self._other_peak, float(np.max(np.abs(x) ** 2)))
            gamma_l = (mt * n * peak - gp * others) / gp
            gamma_u = gp * others / (mt * n - gp)
        return EntryCoefficients(t, d, self.eta, v, *spa, *rng, gamma_e, gamma_l, gamma_u)

    def _range(self, x: np.ndarray, t: int, d: int, ex: float):
        mt, n = self._shape
        spectra = self._spectra.copy()
        spectra[t] = sfft.fft(x, self._nfft)
        circ = sfft.ifft(spectra[t][None, :] * spectra.conj(), axis=1)
        r0 = circ[:, self._neg_lag]  # r_{t,l}(k) with entry (t, d) zeroed
        mag = r0.real ** 2 + r0.imag ** 2
        own = mag[t].sum() - mag[t, n - 1]
        cross = mag.sum() - mag[t].sum()
        c2 = self._gamma_t + 2.0 * cross + own
        window = self._padded[:, d: d + 2 * n - 1].copy()
        window[t] = np.pad(x, (n - 1, n - 1))[d: d + 2 * n - 1]
        # window[l, k + n - 1] = s_{l, d + k}
        c1 = 2.0 * np.conj(np.sum(r0 * window))
        seg = window[t]
        c0 = complex(np.sum(np.conj(seg * seg[::-1])))
        c5 = 2.0 * (ex + self._other_energy)
        d1 = 2.0 * ex
        d2 = ex * ex + self._other_row4
        return c0, complex(c1), float(c2), c5, d1, d2

    def _spatial(self, s: np.ndarray, t: int, d: int):
        if self.scenario is None:
            nan = float("nan")
            return 0j, nan, nan, 0j, nan, nan
        zeroed = s.copy()
        zeroed[t, d] = 0
        col = zeroed[:, d]
        out = []
        for a in (self.scenario.a_u, self.scenario.a_d):
            c0 = complex(col.conj() @ a[:, t])
            c1 = metrics.quadratic_sum(zeroed, a)
            out += [c0, c1, float(a[t, t].real)]
        return tuple(out)


def entry_coefficients(s, t: int, d: int, scenario: AngleScenario | None, eta: float,
                       constraint: ConstraintSpec | None = None) -> EntryCoefficients:
    b = CoefficientBuilder(scenario, eta, constraint)
    b.start_row(s, t)
    return b.entry(s, t, d)


def spatial_coeffs(s, t: int, d: int, scenario: AngleScenario):
    """(a0, a1, a3, b0, b1, b3) for entry ``(t, d)``."""
    c = entry_coefficients(s, t, d, scenario, 1.0)
    return c.a0, c.a1, c.a3, c.b0, c.b1, c.b3


def range_coeffs(s, t: int, d: int):
    """(c0, c1, c2, c5, d1, d2) for entry ``(t, d)``."""
    c = entry_coefficients(s, t, d, None, 0.0)
    return c.c0, c.c1, c.c2, c.c5, c.d1, c.d2


def constraint_bounds(s, t: int, d: int, constraint: ConstraintSpec):
    """(gamma_e, gamma_l, gamma_u); the PAR bounds are NaN for other constraints."""
    s = np.asarray(s)
    constraint.check(*s.shape)
    c = entry_coefficients(s, t, d, None, 0.0, constraint)
    return c.gamma_e, c.gamma_l, c.gamma_u
