"""Exact minimizers of the single-entry objective under each constraint.

The entry is written in polar form ``r * exp(j*phi)``.  For the energy and
PAR constraints the modulus is optimized first (at the incoming phase) from
the real roots of a degree-10 polynomial, then the phase from the real
roots of a degree-8 polynomial in ``z = tan(phi/2)``.  Unit-modulus entries
only need the phase stage, and the MPSK case is an L-point DFT evaluation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .coeffs import EntryCoefficients
from .model import Constraint, ConstraintSpec
from .rootfind import RealPolynomial, ZeroPolynomialError, real_roots

log = logging.getLogger(__name__)

TIE_TOL = 1e-12
# grid used when the polynomial route fails numerically
_FALLBACK_POINTS = 4001


class EmptyIntervalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PolarSolution:
    r_star: float
    phi_star: float
    f_value: float
    index: int | None = None  # alphabet index, discrete phase only

    @property
    def entry(self) -> complex:
        if self.index is not None:
            return complex(np.exp(1j * self.phi_star))
        if self.r_star == 1.0:
            return complex(np.exp(1j * self.phi_star))
        return complex(self.r_star * np.exp(1j * self.phi_star))


def wrap_phase(phi):
    """Map angles onto [-pi, pi)."""
    return (np.asarray(phi) + np.pi) % (2 * np.pi) - np.pi


def _argmin_tie(values: np.ndarray, prefer: int | None = None) -> int:
    """Index of the minimum; ties within TIE_TOL go to ``prefer``, else the first."""
    values = np.asarray(values, dtype=float)
    vmin = np.min(values)
    if not np.isfinite(vmin):
        return prefer if prefer is not None else int(np.argmin(values))
    limit = vmin + TIE_TOL * (1.0 + abs(vmin))
    if prefer is not None and values[prefer] <= limit:
        return prefer
    return int(np.nonzero(values <= limit)[0][0])


# -- polynomials ---------------------------------------------------------------

def build_r_polynomial(c: EntryCoefficients, phi0: float) -> RealPolynomial:
    """Numerator of d f / d r at fixed phase, degree 10 in r.

    The closed-form coefficients list the highest power first, so the
    array is reversed into ascending order at the end.
    """
    eta = c.eta
    e = np.exp(1j * phi0)
    a0, a1, a3, b0, b1, b3 = c.a0, c.a1, c.a3, c.b0, c.b1, c.b3
    c2, d1, d2 = c.c2, c.d1, c.d2
    re = np.real
    rho0 = a3 * b0 - b3 * a0
    rho1 = a3 * b1 - a1 * b3
    rho2 = c.c5 + 2 * re(c.c0 * e * e)
    rho3 = b1 * a0 - a1 * b0
    rho4 = re(c.c1 * e)
    rho5 = re(b0 * e)
    rho6 = d1 ** 2 + 2 * d2
    em = eta - 1
    q = 2 * rho5 ** 2 + b1 * b3
    w = d2 * rho2 - c2 * d1
    p = [
        2 * eta * re(rho0 * e),
        2 * (eta * rho1 + em * b3 ** 2 * rho2),
        2 * (eta * re((rho3 + 2 * d1 * rho0) * e) + em * (3 * b3 ** 2 * rho4 + 4 * b3 * rho5 * rho2)),
        4 * (eta * d1 * rho1 + em * (q * rho2 + c2 * b3 ** 2 + 6 * b3 * rho5 * rho4)),
        2 * (eta * re((rho6 * rho0 + 2 * d1 * rho3) * e)
             + em * (rho4 * (12 * rho5 ** 2 + 6 * b1 * b3 + b3 ** 2 * d1) + 4 * rho5 * (b1 * rho2 + 2 * b3 * c2))),
        2 * (eta * rho6 * rho1 + em * (rho2 * (b1 ** 2 - d2 * b3 ** 2) + b3 ** 2 * c2 * d1
                                       + 4 * c2 * q + 4 * rho5 * rho4 * (3 * b1 + b3 * d1))),
        2 * (eta * re((rho6 * rho3 + 2 * d1 * d2 * rho0) * e)
             + em * (rho4 * (3 * b1 ** 2 - b3 ** 2 * d2 + 2 * d1 * q) + 4 * rho5 * (2 * b1 * c2 - b3 * w))),
        4 * (eta * d1 * d2 * rho1 + em * (b1 ** 2 * c2 + 2 * (b1 * d1 - b3 * d2) * rho5 * rho4 - w * q)),
        2 * (eta * re((d2 ** 2 * rho0 + 2 * d1 * d2 * rho3) * e)
             + em * (rho4 * (b1 ** 2 * d1 - 2 * d2 * q) - 4 * b1 * rho5 * w)),
        2 * (eta * d2 ** 2 * rho1 - em * (b1 ** 2 * w + 4 * b1 * d2 * rho5 * rho4)),
        2 * (eta * d2 ** 2 * re(rho3 * e) - em * b1 ** 2 * d2 * rho4),
    ]
    return RealPolynomial(np.asarray(p[::-1], dtype=float))


def build_phi_polynomial(c: EntryCoefficients, r: float) -> RealPolynomial:
    """Numerator of d f / d phi at fixed modulus, degree 8 in z = tan(phi/2)."""
    eta = c.eta
    e1 = 1 - eta
    a0r, a0i = c.a0.real, c.a0.imag
    b0r, b0i = c.b0.real, c.b0.imag
    c0r, c0i = c.c0.real, c.c0.imag
    c1r, c1i = c.c1.real, c.c1.imag
    a1, a3, b1, b3 = c.a1, c.a3, c.b1, c.b3
    x0 = r ** 4 + r ** 2 * c.d1 + c.d2
    x1 = r ** 2 * (a3 * b0r - a0r * b3) + (a1 * b0r - a0r * b1)
    x2 = r ** 2 * (a3 * b0i - a0i * b3) + (a1 * b0i - a0i * b1)
    x3 = r * (a0r * b0i - a0i * b0r)
    x4 = r ** 2 * b3 + b1
    x5 = b0r ** 2 - 2 * b0i ** 2
    x6 = r * b0r
    x7 = r * b0i
    x8 = r * c0r
    x9 = r * c0i
    x10 = x4 * (2 * x6 * x8 - 5 * x7 * x9)
    x11 = x4 * (x6 * c1r - x7 * c1i)
    r2 = r * r
    lo = x4 ** 2 - 4 * x6 * (x4 - x6)
    hi = x4 ** 2 + 4 * x6 * (x4 + x6)
    q = [
        2 * r * (eta * x0 * (2 * x3 - x2) + e1 * (c1i - 2 * x9) * lo),
        4 * r * (eta * x0 * x1 + e1 * (4 * x7 * (2 * x9 - c1i) * (x4 - 2 * x6) + (4 * x8 - c1r) * lo)),
        4 * r * (eta * x0 * (4 * x3 - x2)
                 + e1 * (-8 * x7 * (4 * x8 - c1r) * (x4 - 2 * x6) + x4 ** 2 * (4 * x9 + c1i)
                         + 4 * (r2 * x5 * (2 * x9 - c1i) - 6 * x6 * x9 * (x4 - x6)))),
        4 * r * (3 * eta * x0 * x1
                 + e1 * (x4 ** 2 * (4 * x8 - 3 * c1r) + 8 * x10 + 4 * x11
                         + 4 * (x5 * r2 * (c1r - 8 * x8) - 2 * x7 ** 2 * c1r
                                - 2 * x6 * (2 * x6 * x8 - x7 * (14 * x9 - c1i))))),
        8 * r * (3 * eta * x0 * x3
                 + e1 * (x9 * (5 * x4 ** 2 - 24 * r2 * x5) + 2 * x4 * (4 * x7 * c1r + x6 * c1i)
                         - 4 * x6 * (16 * x7 * x8 + x9 * x6))),
        4 * r * (3 * eta * x0 * x1
                 + e1 * (-x4 ** 2 * (4 * x8 + 3 * c1r) + 8 * x10 - 4 * x11
                         + 4 * (x5 * r2 * (c1r + 8 * x8) - 2 * x7 ** 2 * c1r
                                + 2 * x6 * (2 * x6 * x8 - x7 * (14 * x9 + c1i))))),
        4 * r * (eta * x0 * (4 * x3 + x2)
                 + e1 * (8 * x7 * (4 * x8 + c1r) * (x4 + 2 * x6) + x4 ** 2 * (4 * x9 - c1i)
                         + 4 * (r2 * x5 * (2 * x9 + c1i) + 6 * x6 * x9 * (x4 + x6)))),
        4 * r * (eta * x0 * x1 + e1 * (4 * x7 * (2 * x9 + c1i) * (x4 + 2 * x6) - (4 * x8 + c1r) * hi)),
        2 * r * (eta * x0 * (2 * x3 + x2) - e1 * (c1i + 2 * x9) * hi),
    ]
    return RealPolynomial(np.asarray(q[::-1], dtype=float))


# -- single-coordinate stages ----------------------------------------------------

def _r_stage(c: EntryCoefficients, phi0: float, lo: float, hi: float, r_in: float | None):
    cands = [lo, hi]
    try:
        poly = build_r_polynomial(c, phi0)
        if not poly.is_zero:
            roots = real_roots(poly)
            cands.extend(roots[(roots > lo) & (roots < hi)])
    except (np.linalg.LinAlgError, ValueError, FloatingPointError):
        log.debug("r-polynomial root finding failed; using grid")
        cands.extend(np.linspace(lo, hi, _FALLBACK_POINTS))
    prefer = None
    if r_in is not None:
        cands.append(min(max(r_in, lo), hi))
    cands = np.asarray(cands, dtype=float)
    order = np.argsort(cands, kind="stable")
    cands = cands[order]
    if r_in is not None:
        prefer = int(np.nonzero(order == len(order) - 1)[0][0])
    vals = np.asarray(c.value_polar(cands, phi0), dtype=float)
    i = _argmin_tie(vals, prefer)
    return float(cands[i]), float(vals[i])


def _phi_stage(c: EntryCoefficients, r: float, phi_in: float):
    if r == 0.0:
        return phi_in, float(c.value(0.0))
    cands = [-np.pi]
    try:
        poly = build_phi_polynomial(c, r)
        if not poly.is_zero:
            cands.extend(2 * np.arctan(real_roots(poly)))
    except (np.linalg.LinAlgError, ValueError, FloatingPointError):
        log.debug("phi-polynomial root finding failed; using grid")
        cands.extend(np.linspace(-np.pi, np.pi, _FALLBACK_POINTS, endpoint=False))
    cands.append(phi_in)
    cands = wrap_phase(np.asarray(cands, dtype=float))
    order = np.argsort(cands, kind="stable")
    cands = cands[order]
    prefer = int(np.nonzero(order == len(order) - 1)[0][0])
    vals = np.asarray(c.value_polar(r, cands), dtype=float)
    i = _argmin_tie(vals, prefer)
    return float(cands[i]), float(vals[i])


def solve_energy(c: EntryCoefficients, phi0: float | None = None, refine: bool = True) -> PolarSolution:
    """Total-energy constraint: 0 <= r <= sqrt(gamma_e).

    With ``refine=False`` this is one r-stage at the incoming phase followed
    by one phase stage.  That alternation can stall at a coordinate-wise
    minimum (most visibly at r = 0, where the phase has no effect), so by
    default a coarse polar scan seeds a second alternation and the better
    result is polished with further alternating rounds.
    """
    if phi0 is None:
        phi0 = c.phi0
    hi = float(np.sqrt(max(c.gamma_e, 0.0)))
    return _alternate(c, phi0, 0.0, hi, refine)


def par_interval(c: EntryCoefficients) -> tuple[float, float]:
    lo = float(np.sqrt(max(c.gamma_l, 0.0)))
    hi = float(np.sqrt(max(min(c.gamma_u, c.gamma_e), 0.0)))
    if lo > hi:
        if lo - hi > 1e-9 * max(1.0, hi):
            raise EmptyIntervalError(f"empty PAR interval [{lo}, {hi}]")
        lo = hi
    return lo, hi


def solve_par(c: EntryCoefficients, phi0: float | None = None, refine: bool = True) -> PolarSolution:
    """PAR constraint: modulus confined to [sqrt(max(0, gamma_l)), sqrt(min(gamma_u, gamma_e))]."""
    if phi0 is None:
        phi0 = c.phi0
    lo, hi = par_interval(c)
    return _alternate(c, phi0, lo, hi, refine)


_SCAN_R = 9
_SCAN_PHI = 16
_POLISH_ROUNDS = 8


def _one_round(c, phi, lo, hi, r_in):
    r, _ = _r_stage(c, phi, lo, hi, r_in)
    phi, f = _phi_stage(c, r, phi)
    return r, phi, f


def _alternate(c: EntryCoefficients, phi0: float, lo: float, hi: float,
               refine: bool = True) -> PolarSolution:
    phi0 = wrap_phase(phi0).item()
    r, phi, f = _one_round(c, phi0, lo, hi, c.r0)
    phi_used = phi0  # phase at which the current r was chosen
    if not refine or hi == lo == 0.0:
        return PolarSolution(r, phi, f)
    rs = np.linspace(lo, hi, _SCAN_R)
    phis = -np.pi + 2 * np.pi * np.arange(_SCAN_PHI) / _SCAN_PHI
    scan = np.asarray(c.value_polar(rs[:, None], phis[None, :]))
    k = int(np.argmin(scan))
    if scan.flat[k] < f:
        r2, phi2, f2 = _one_round(c, phis[k % _SCAN_PHI], lo, hi, rs[k // _SCAN_PHI])
        if f2 < f - TIE_TOL * (1 + abs(f)):
            r, phi, f = r2, phi2, f2
            phi_used = phis[k % _SCAN_PHI]
    for _ in range(_POLISH_ROUNDS):
        # once the phase stops moving, r is already optimal for it
        if abs(wrap_phase(phi - phi_used)) <= 1e-9:
            break
        phi_used = phi
        r2, phi2, f2 = _one_round(c, phi, lo, hi, r)
        if not f2 < f - TIE_TOL * (1 + abs(f)):
            break
        r, phi, f = r2, phi2, f2
    return PolarSolution(r, phi, f)


def solve_continuous(c: EntryCoefficients) -> PolarSolution:
    """Unit modulus, any phase."""
    phi, f = _phi_stage(c, 1.0, c.phi0)
    return PolarSolution(1.0, phi, f)


def _fold(seq: np.ndarray, L: int) -> np.ndarray:
    out = np.zeros(L, dtype=complex)
    np.add.at(out, np.arange(len(seq)) % L, seq)
    return out


def discrete_sequences(c: EntryCoefficients) -> tuple[np.ndarray, np.ndarray]:
    """Numerator (g_0..g_6) and denominator (h_0..h_2) sequences at r = 1.

    g_k multiplies exp(j(3-k)phi) and h_k multiplies exp(j(1-k)phi).  The
    range part is scaled by 1 / (1 + d1 + d2), which equals 1 / (Mt N^2)
    when every other entry is unimodular.
    """
    eta = c.eta
    scale = (1 - eta) / (1.0 + c.d1 + c.d2)
    a1 = c.a1 + c.a3
    b1 = c.b1 + c.b3
    c2 = c.c2 + c.c5
    c0, c1, b0, a0 = c.c0, c.c1, c.b0, c.a0
    c3, b2 = np.conj(c1), np.conj(b0)
    if eta == 0:
        # spatial denominator drops out; keep the range numerator alone
        h = np.array([0, 1, 0], dtype=complex)
        g = np.array([0, c0, c1, c2, c3, np.conj(c0), 0], dtype=complex) * scale
        return g, h
    h = np.array([b0, b1, b2], dtype=complex)
    g0 = c0 * b0 * scale
    g1 = (c0 * b1 + c1 * b0) * scale
    g2 = (c0 * b2 + c1 * b1 + c2 * b0) * scale + a0 * eta
    g3 = (c1 * b2 + c2 * b1 + c3 * b0) * scale + a1 * eta
    g = np.array([g0, g1, g2, g3, np.conj(g2), np.conj(g1), np.conj(g0)], dtype=complex)
    return g, h


def solve_discrete(c: EntryCoefficients, L: int) -> PolarSolution:
    """MPSK alphabet {2 pi l / L}: objective at every phase through two L-point DFTs."""
    if L < 2:
        raise ValueError("alphabet size must be >= 2")
    g, h = discrete_sequences(c)
    l = np.arange(L)
    num = np.exp(2j * np.pi * 3 * l / L) * np.fft.fft(_fold(g, L))
    den = np.exp(2j * np.pi * l / L) * np.fft.fft(_fold(h, L))
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(den.real > 0, num.real / np.where(den.real > 0, den.real, 1.0), np.inf)
    i = _argmin_tie(vals)
    return PolarSolution(1.0, float(wrap_phase(2 * np.pi * i / L)), float(vals[i]), index=i)


def enumerate_discrete(c: EntryCoefficients, L: int) -> np.ndarray:
    """Objective at each alphabet point by direct reconstruction."""
    return np.asarray(c.value(np.exp(2j * np.pi * np.arange(L) / L)), dtype=float)


def grid_oracle(c: EntryCoefficients, constraint: ConstraintSpec, n_r: int = 2001,
                n_phi: int = 2001) -> PolarSolution:
    """Exhaustive minimum of the reconstructed objective over a feasible polar grid."""
    if n_r < 3 or n_phi < 3:
        raise ValueError("grid sizes must be >= 3")
    kind = constraint.kind
    if kind is Constraint.DISCRETE_PHASE:
        vals = enumerate_discrete(c, constraint.alphabet_size)
        i = _argmin_tie(vals)
        return PolarSolution(1.0, float(wrap_phase(2 * np.pi * i / constraint.alphabet_size)),
                             float(vals[i]), index=i)
    if kind is Constraint.ENERGY:
        rs = np.linspace(0.0, np.sqrt(max(c.gamma_e, 0.0)), n_r)
    elif kind is Constraint.PAR:
        rs = np.linspace(*par_interval(c), n_r)
    else:
        rs = np.ones(1)
    phis = -np.pi + 2 * np.pi * np.arange(n_phi) / n_phi
    best = (np.inf, 0, 0)
    chunk = max(1, 2_000_000 // n_phi)
    for start in range(0, len(rs), chunk):
        block = np.asarray(c.value_polar(rs[start:start + chunk, None], phis[None, :]))
        flat = block.ravel()
        i = _argmin_tie(flat)
        if not np.isfinite(best[0]) or flat[i] < best[0] - TIE_TOL * (1 + abs(best[0])):
            best = (float(flat[i]), start + i // n_phi, i % n_phi)
    f, ir, ip = best
    return PolarSolution(float(rs[ir]), float(phis[ip]), f)


def solve(c: EntryCoefficients, constraint: ConstraintSpec, refine: bool = True) -> PolarSolution:
    kind = constraint.kind
    if kind is Constraint.ENERGY:
        return solve_energy(c, refine=refine)
    if kind is Constraint.PAR:
        return solve_par(c, refine=refine)
    if kind is Constraint.CONTINUOUS_PHASE:
        return solve_continuous(c)
    return solve_discrete(c, constraint.alphabet_size)
