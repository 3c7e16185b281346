"""Polynomial roots and Schur stability tests for discrete-time systems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COEFF_TRIM_TOL = 1e-14
MARGINAL_ROOT_BAND = 1e-9


class SchurTestDisagreement(RuntimeError):
    """The root-magnitude test and the coefficient recursion returned different verdicts."""


def _trim(coeffs) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    while len(c) > 1 and abs(c[-1]) <= COEFF_TRIM_TOL:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial stored as ascending-power coefficients.

    Coefficients above the last one exceeding ``COEFF_TRIM_TOL`` in magnitude
    are dropped, so the leading coefficient of a nonzero polynomial is nonzero.
    """

    coeffs: tuple[float, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("empty coefficient vector")
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, np.asarray(self.coeffs))


def roots(p: Polynomial) -> list[complex]:
    """All roots of ``p`` with multiplicity, via companion-matrix eigenvalues.

    Residuals satisfy |p(r)| <= 1e-8 * ||coeffs|| for the polynomial scales
    handled here (low degree, moderate coefficients). Degree-0 input yields
    an empty list.
    """
    if p.degree < 1:
        return []
    rts = np.roots(p.coeffs[::-1])
    return sorted((complex(r) for r in rts), key=lambda r: (r.real, r.imag))


def spectral_radius_poly(p: Polynomial) -> float:
    """Largest root magnitude of ``p``."""
    if p.degree < 1:
        raise ValueError("spectral radius needs degree >= 1")
    return max(abs(r) for r in roots(p))


def _schur_recursion_stable(monic_desc: np.ndarray) -> bool:
    # Classic coefficient-shrinking recursion: strip one degree per round,
    # rejecting whenever the trailing (reflection) coefficient reaches 1.
    c = np.array(monic_desc, dtype=float)
    while c.size > 1:
        k = c[-1]
        if not np.isfinite(k) or abs(k) >= 1.0:
            return False
        c = (c - k * c[::-1])[:-1] / (1.0 - k * k)
    return True


def is_schur(p: Polynomial, margin: float = 0.0) -> bool:
    """True when every root of ``p`` lies strictly inside radius 1 - margin.

    Verdicts are computed twice, from root magnitudes and from the
    coefficient recursion; disagreement raises :class:`SchurTestDisagreement`.
    Roots within ``MARGINAL_ROOT_BAND`` of the boundary are classified as
    unstable so certification stays conservative.
    """
    if p.degree < 1:
        raise ValueError("stability test needs degree >= 1")
    if not 0.0 <= margin < 1.0:
        raise ValueError("margin must lie in [0, 1)")
    limit = 1.0 - margin
    radius = spectral_radius_poly(p)
    if abs(radius - limit) <= MARGINAL_ROOT_BAND:
        return False
    by_roots = radius < limit

    scaled = np.asarray(p.coeffs) * limit ** np.arange(len(p.coeffs))
    desc = scaled[::-1]
    by_recursion = _schur_recursion_stable(desc / desc[0])
    if by_recursion != by_roots:
        raise SchurTestDisagreement(
            f"root test says {by_roots}, recursion says {by_recursion} "
            f"for coeffs {p.coeffs} at margin {margin}"
        )
    return by_roots
