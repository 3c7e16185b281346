"""Characteristic-equation analysis of simultaneous vs alternating optimistic
updates on bilinear saddle games.

For f(x, y) = x'Ay the closed-loop spectrum factors per eigenvalue lambda of
AA': each lambda contributes one low-degree polynomial whose roots are the
induced multipliers. The whole system is stable exactly when every factor is
Schur, so thresholds reduce to where the worst factor's radius crosses 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stability import Polynomial, roots, spectral_radius_poly

CROSSING_TOL = 1e-6
_ALT_BOUNDARY = 2.0 / 3.0
_SIM_BOUNDARY = 1.0 / np.sqrt(3.0)


def _char_poly_coeffs(M: np.ndarray) -> np.ndarray:
    """Ascending coefficients of det(sI - M) by the trace recursion."""
    n = M.shape[0]
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    N = np.zeros_like(M)
    for k in range(1, n + 1):
        N = M @ N + coeffs[n - k + 1] * np.eye(n)
        coeffs[n - k] = -np.trace(M @ N) / k
    return coeffs


@dataclass(frozen=True)
class BilinearGame:
    """Square non-singular coupling A with the derived spectral data."""

    A: tuple[tuple[float, ...], ...]
    gamma: float
    eigs_AAT: tuple[float, ...]

    @classmethod
    def from_matrix(cls, matrix) -> "BilinearGame":
        A = np.asarray(matrix, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("coupling matrix must be square")
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] <= 1e-12 * max(1.0, sv[0]):
            raise ValueError("coupling matrix must be non-singular")
        char = _char_poly_coeffs(A @ A.T)
        eigs = []
        for r in roots(Polynomial(tuple(char))):
            if abs(r.imag) > 1e-8 * max(1.0, abs(r)) or r.real <= 0:
                raise ValueError("AA' produced a non-positive eigenvalue")
            eigs.append(float(r.real))
        eigs = tuple(sorted(eigs))
        return cls(
            A=tuple(tuple(row) for row in A),
            gamma=float(np.sqrt(eigs[-1])),
            eigs_AAT=eigs,
        )


def alt_char_poly(lam: float, eta: float) -> Polynomial:
    """Cubic factor z(z-1)^2 + eta^2 lam (2z-1)^2 of the alternating update."""
    if lam <= 0 or eta <= 0:
        raise ValueError("lam and eta must be positive")
    s2 = eta * eta * lam
    return Polynomial((s2, 1.0 - 4.0 * s2, 4.0 * s2 - 2.0, 1.0))


def sim_char_poly(lam: float, eta: float) -> Polynomial:
    """Quartic factor z^2(z-1)^2 + eta^2 lam (2z-1)^2 of the simultaneous update."""
    if lam <= 0 or eta <= 0:
        raise ValueError("lam and eta must be positive")
    s2 = eta * eta * lam
    return Polynomial((s2, -4.0 * s2, 1.0 + 4.0 * s2, -2.0, 1.0))


def _factor_for(mode: str, s: float) -> Polynomial:
    if mode == "alt":
        return alt_char_poly(1.0, s)
    if mode == "sim":
        return sim_char_poly(1.0, s)
    raise ValueError(f"unknown mode {mode!r}")


def spectrum_curve(mode: str, points) -> list[tuple[float, float]]:
    """Largest multiplier magnitude as a function of s = eta sqrt(lam)."""
    out = []
    for s in points:
        if s <= 0:
            raise ValueError("s values must be positive")
        out.append((float(s), spectral_radius_poly(_factor_for(mode, float(s)))))
    return out


def _crossing(mode: str) -> float:
    """Where the factor's spectral radius crosses 1, by bisection."""
    radius = lambda s: spectral_radius_poly(_factor_for(mode, s))
    lo, hi = None, None
    s = 0.05
    while s < 1.5:
        if radius(s) > 1.0 + 1e-12:
            hi = s
            break
        lo = s
        s += 0.05
    if lo is None or hi is None:
        raise RuntimeError("no stability crossing found on the probed range")
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if radius(mid) > 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def bilinear_threshold(mode: str, game: BilinearGame) -> float:
    """Largest stable step size: 2/(3 gamma) alternating, 1/(sqrt(3) gamma)
    simultaneous. Cross-validated against the spectrum-curve crossing."""
    if mode == "alt":
        boundary = _ALT_BOUNDARY
    elif mode == "sim":
        boundary = _SIM_BOUNDARY
    else:
        raise ValueError(f"unknown mode {mode!r}")
    crossing = _crossing(mode)
    if abs(crossing - boundary) > CROSSING_TOL:
        raise RuntimeError(
            f"spectrum crossing {crossing:.9g} disagrees with boundary {boundary:.9g}"
        )
    return boundary / game.gamma
