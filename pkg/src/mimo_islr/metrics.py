"""Direct evaluation of beampattern, correlations and the two ISLR metrics.

Everything here works on the full waveform matrix and is used as the
reference against which the per-entry coefficient machinery is checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .model import AngleScenario, DegenerateError

# Below this length the O(N^2) direct sums are cheaper than FFTs.
_FFT_MIN_N = 16


@dataclass(frozen=True)
class IslrReport:
    spatial_islr: float
    range_islr: float
    objective: float
    eta: float

    @property
    def spatial_islr_db(self) -> float:
        return to_db(self.spatial_islr)

    @property
    def range_islr_db(self) -> float:
        return to_db(self.range_islr)


def to_db(x: float) -> float:
    """10*log10 for power ratios; values <= 1e-300 clamp to -3000 dB."""
    if np.isnan(x):
        return float("nan")
    if x <= 1e-300:
        return -3000.0
    return float(10.0 * np.log10(x))


def steering_vector(theta: float, mt: int, dt_over_lambda: float = 0.5) -> np.ndarray:
    """ULA transmit steering vector, element k is exp(j 2 pi (d/lambda) k sin(theta))."""
    k = np.arange(mt)
    return np.exp(2j * np.pi * dt_over_lambda * k * np.sin(theta))


def steering_matrix(theta, mt: int, dt_over_lambda: float = 0.5) -> np.ndarray:
    """Stack steering vectors for each angle in ``theta`` as columns (mt x K)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    k = np.arange(mt)[:, None]
    return np.exp(2j * np.pi * dt_over_lambda * k * np.sin(theta)[None, :])


def beampattern(s, theta, dt_over_lambda: float = 0.5):
    """Transmit power (1/N) sum_n |a(theta)^H s_n|^2.

    ``theta`` may be a scalar or an array; the result has the same shape.
    """
    s = np.asarray(s)
    theta_arr = np.asarray(theta, dtype=float)
    a = steering_matrix(theta_arr.ravel(), s.shape[0], dt_over_lambda)
    proj = a.conj().T @ s
    p = np.sum(np.abs(proj) ** 2, axis=1) / s.shape[1]
    if theta_arr.ndim == 0:
        return float(p[0])
    return p.reshape(theta_arr.shape)


def quadratic_sum(s, a: np.ndarray) -> float:
    """sum_n s_n^H A s_n for Hermitian ``a``, returned as a checked real number."""
    s = np.asarray(s)
    val = np.vdot(s, a @ s)
    if abs(val.imag) > 1e-10 * abs(val.real) + 1e-14:
        raise AssertionError(f"Hermitian form has imaginary residue {val.imag!r}")
    return float(val.real)


def spatial_islr(s, scenario: AngleScenario) -> float:
    """Undesired-to-desired averaged beampattern power ratio."""
    s = np.asarray(s)
    num, den = spatial_parts(s, scenario)
    energy = float(np.vdot(s, s).real)
    if den <= 1e-15 * energy or den <= 0:
        raise DegenerateError("desired-direction power is zero")
    return num / den


def spatial_parts(s, scenario: AngleScenario) -> tuple[float, float]:
    return quadratic_sum(s, scenario.a_u), quadratic_sum(s, scenario.a_d)


def cross_correlation(x, y, k: int) -> complex:
    """Aperiodic cross-correlation sum_n x_n conj(y_{n+k})."""
    x = np.asarray(x)
    y = np.asarray(y)
    n = len(x)
    if len(y) != n:
        raise ValueError("sequences must have equal length")
    if not -n < k < n:
        raise ValueError(f"lag {k} out of range for length {n}")
    if k >= 0:
        return complex(np.sum(x[: n - k] * np.conj(y[k:])))
    return complex(np.sum(x[-k:] * np.conj(y[: n + k])))


def correlations(s) -> np.ndarray:
    """All auto/cross correlations r_{m,l}(k).

    Returns an array of shape (mt, mt, 2n-1) indexed ``[m, l, k + n - 1]``.
    """
    s = np.atleast_2d(np.asarray(s, dtype=complex))
    mt, n = s.shape
    if n < _FFT_MIN_N:
        return _correlations_direct(s)
    return _correlations_fft(s)


def _correlations_direct(s: np.ndarray) -> np.ndarray:
    mt, n = s.shape
    out = np.empty((mt, mt, 2 * n - 1), dtype=complex)
    for m in range(mt):
        for l in range(mt):
            # np.correlate(a, v)[i] = sum_n a[n+i-(n-1)] conj(v[n]), i.e. lag -k of ours
            out[m, l] = np.correlate(s[m], s[l], mode="full")[::-1]
    return out


def _correlations_fft(s: np.ndarray) -> np.ndarray:
    mt, n = s.shape
    nfft = sfft.next_fast_len(2 * n - 1)
    f = sfft.fft(s, nfft, axis=1)
    circ = sfft.ifft(f[:, None, :] * f[None, :, :].conj(), axis=2)
    # circ[m, l, j] = r_{m,l}(-j)
    lags = np.arange(-(n - 1), n)
    return circ[:, :, (-lags) % nfft]


def range_isl(s) -> float:
    """Total auto- and cross-correlation sidelobe energy."""
    r = correlations(s)
    n = (r.shape[2] + 1) // 2
    total = float(np.sum(r.real ** 2 + r.imag ** 2))
    main = np.diagonal(r[:, :, n - 1]).real
    return total - float(np.sum(main ** 2))


def mainlobe_energy(s) -> float:
    """sum_m |r_mm(0)|^2, i.e. the sum of squared row energies."""
    s = np.atleast_2d(np.asarray(s))
    rows = np.sum(np.abs(s) ** 2, axis=1)
    return float(np.sum(rows ** 2))


def range_islr(s) -> float:
    main = mainlobe_energy(s)
    if main <= 0:
        raise DegenerateError("waveform has zero energy")
    return range_isl(s) / main


def objective(s, scenario: AngleScenario, eta: float) -> IslrReport:
    """Scalarized objective eta*spatial + (1-eta)*range with both components."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta out of [0,1]: {eta}")
    sp = spatial_islr(s, scenario)
    rg = range_islr(s)
    return IslrReport(sp, rg, eta * sp + (1.0 - eta) * rg, eta)


def weighted_objective(s, scenario: AngleScenario, eta: float) -> float:
    """Like :func:`objective` but skips the spatial term entirely when eta == 0."""
    if eta == 0.0:
        return range_islr(s)
    if eta == 1.0:
        return spatial_islr(s, scenario)
    return eta * spatial_islr(s, scenario) + (1.0 - eta) * range_islr(s)
