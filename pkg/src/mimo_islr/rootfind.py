"""Roots of small real polynomials through companion-matrix eigenvalues."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DEGREE = 10


class ZeroPolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial, coefficients in ascending degree order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, copy=True).ravel()
        if c.size == 0:
            c = np.zeros(1)
        if c.size > MAX_DEGREE + 1:
            raise ValueError(f"degree above {MAX_DEGREE} not supported")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def trimmed(self, rtol: float = 0.0) -> np.ndarray:
        """Coefficients with negligible leading terms removed.

        A leading coefficient is dropped when ``|c| <= rtol * max|c|``.
        """
        c = self.coeffs
        scale = np.max(np.abs(c))
        if scale == 0:
            return c[:1] * 0
        keep = np.nonzero(np.abs(c) > rtol * scale)[0]
        return c[: keep[-1] + 1]

    @property
    def degree(self) -> int:
        return len(self.trimmed()) - 1

    def __call__(self, x):
        return _horner(self.coeffs, x)


def _horner(c: np.ndarray, x):
    x = np.asarray(x)
    if x.ndim == 1 and len(c) > 1:
        # one power table beats a Python-level Horner loop for short vectors
        return np.power.outer(x, np.arange(len(c))) @ c
    acc = np.full(x.shape, c[-1], dtype=np.result_type(x, c))
    for ck in c[-2::-1]:
        acc = acc * x + ck
    return acc


def roots(p: RealPolynomial, rtol: float = 1e-14) -> np.ndarray:
    """All complex roots of ``p`` (with multiplicity) after trimming.

    The polynomial is scaled by its largest coefficient and the roots are the
    eigenvalues of the resulting companion matrix.
    """
    if p.is_zero:
        raise ZeroPolynomialError("polynomial is identically zero")
    c = p.trimmed(rtol)
    deg = len(c) - 1
    if deg < 1:
        return np.empty(0, dtype=complex)
    c = c / np.max(np.abs(c))
    # strip roots at the origin exactly; they wreck the companion conditioning
    nz = np.nonzero(c)[0][0]
    zeros = np.zeros(nz, dtype=complex)
    c = c[nz:]
    deg_rest = len(c) - 1
    if deg_rest < 1:
        return zeros
    comp = np.zeros((deg_rest, deg_rest))
    comp[1:, :-1] = np.eye(deg_rest - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.concatenate([zeros, np.linalg.eigvals(comp).astype(complex)])


def real_roots(p: RealPolynomial, imag_tol: float = 1e-8, polish: int = 2) -> np.ndarray:
    """Sorted, de-duplicated real roots of ``p``.

    A root counts as real when ``|imag| <= imag_tol * (1 + |real|)``.  Each
    accepted root gets ``polish`` Newton steps on the original polynomial
    (kept only when they reduce the residual).
    """
    z = _merge_clusters(roots(p))
    if z.size == 0:
        return np.empty(0)
    mask = np.abs(z.imag) <= imag_tol * (1.0 + np.abs(z.real))
    x = np.sort(z.real[mask])
    if polish and x.size:
        x = _newton_polish(p.coeffs, x, polish)
        x.sort()
    if x.size == 0:
        return x
    keep = np.concatenate([[True], np.diff(x) > 1e-9])
    return x[keep]


def _merge_clusters(z: np.ndarray, rtol: float = 1e-6) -> np.ndarray:
    """Replace groups of nearly coincident roots by their centroid.

    Eigenvalues of a multiple root scatter symmetrically around it, so the
    centroid is far more accurate than any single member.
    """
    if z.size < 2:
        return z
    close = np.abs(z[:, None] - z[None, :]) <= rtol * (1.0 + np.abs(z))[:, None]
    np.fill_diagonal(close, False)
    lonely = ~close.any(axis=1)
    if lonely.all():
        return z
    out = list(z[lonely])
    pending = list(np.nonzero(~lonely)[0])
    while pending:
        i = pending.pop(0)
        group = [i] + [k for k in pending if close[i, k]]
        pending = [k for k in pending if k not in group]
        out.append(z[group].sum() / len(group))
    return np.asarray(out)


def _newton_polish(c: np.ndarray, x: np.ndarray, steps: int) -> np.ndarray:
    pv = lambda x, cc: _horner(cc, x)  # noqa: E731
    dc = c[1:] * np.arange(1, len(c))
    x = x.copy()
    for _ in range(steps):
        f = pv(x, c)
        df = pv(x, dc)
        ok = df != 0
        step = np.where(ok, f / np.where(ok, df, 1.0), 0.0)
        cand = x - step
        better = np.abs(pv(cand, c)) < np.abs(f)
        x = np.where(better & np.isfinite(cand), cand, x)
    return x
