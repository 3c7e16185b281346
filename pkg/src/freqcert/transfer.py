"""Scalar rational transfer functions of first-order update rules in the z-domain."""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable

import numpy as np

REDUCE_TOL = 1e-10
EQUAL_TOL = 1e-12
_ZERO_TOL = 1e-14

# family -> fields the JSON schema requires for it
_FAMILY_FIELDS = {
    "gd": ("eta",),
    "ogd": ("eta",),
    "gogd": ("alpha", "beta"),
    "pp": ("eta",),
    "pid": ("kp", "ki", "kd"),
    "hgd": ("eta", "a"),
    "general": ("eta", "a", "b"),
    "pegd": ("eta",),
    "rgd": ("eta",),
}


@dataclass(frozen=True)
class MethodSpec:
    """Algebraic description of a first-order method.

    Families: plain gradient step (gd), the optimistic variant using one past
    gradient (ogd), its two-parameter generalization (gogd), the implicit
    proximal step (pp), discrete proportional-integral-derivative control
    (pid), a step built from a horizon of past gradients (hgd), the same with
    past iterates mixed in (general), and the single-call extra-gradient
    variants (pegd, rgd).
    """

    family: str
    eta: float | None = None
    alpha: float | None = None
    beta: float | None = None
    kp: float | None = None
    ki: float | None = None
    kd: float | None = None
    a: tuple[float, ...] | None = None
    b: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.family not in _FAMILY_FIELDS:
            raise ValueError(f"unknown method family {self.family!r}")
        required = _FAMILY_FIELDS[self.family]
        for f in fields(self):
            if f.name == "family":
                continue
            value = getattr(self, f.name)
            if f.name in required:
                if value is None:
                    raise ValueError(f"{self.family} requires field {f.name!r}")
            elif value is not None:
                raise ValueError(f"{self.family} does not accept field {f.name!r}")
        if self.a is not None:
            object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        if self.b is not None:
            object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        self._validate()

    def _validate(self):
        if self.eta is not None and not self.eta > 0:
            raise ValueError("eta must be positive")
        if self.family == "gogd":
            if not self.alpha > 0:
                raise ValueError("alpha must be positive")
            if self.beta < 0:
                raise ValueError("beta must be nonnegative")
        if self.family == "pid":
            if self.kp < 0:
                raise ValueError("kp must be nonnegative")
            if not self.ki > 0:
                raise ValueError("ki must be positive")
            if not np.isfinite(self.kd):
                raise ValueError("kd must be finite")
        if self.family in ("hgd", "general"):
            if len(self.a) < 1:
                raise ValueError("horizon must be at least 1")
        if self.family == "general":
            if len(self.b) != len(self.a):
                raise ValueError("a and b must share the horizon length")
            if abs(sum(self.b) - 1.0) > EQUAL_TOL:
                raise ValueError("iterate weights b must sum to 1")

    @property
    def horizon(self) -> int:
        if self.a is None:
            raise ValueError(f"{self.family} has no horizon")
        return len(self.a)

    @classmethod
    def from_json(cls, data: dict) -> "MethodSpec":
        if not isinstance(data, dict):
            raise ValueError("method spec must be an object")
        family = data.get("family")
        if family not in _FAMILY_FIELDS:
            raise ValueError(f"unknown method family {family!r}")
        allowed = set(_FAMILY_FIELDS[family]) | {"family"}
        unknown = set(data) - allowed
        if unknown:
            raise ValueError(f"unknown method fields {sorted(unknown)}")
        kwargs = {}
        for key in _FAMILY_FIELDS[family]:
            if key not in data:
                raise ValueError(f"{family} requires field {key!r}")
            value = data[key]
            kwargs[key] = tuple(value) if key in ("a", "b") else float(value)
        return cls(family=family, **kwargs)

    def to_json(self) -> dict:
        out = {"family": self.family}
        for key in _FAMILY_FIELDS[self.family]:
            value = getattr(self, key)
            out[key] = list(value) if isinstance(value, tuple) else value
        return out


def _trim_high(coeffs: Iterable[float]) -> list[float]:
    c = [float(v) for v in coeffs]
    while len(c) > 1 and abs(c[-1]) <= _ZERO_TOL:
        c.pop()
    return c


def _poly_from_roots(rts, lead: float) -> list[float]:
    # np.poly returns descending coefficients; conjugate pairs keep the
    # product real up to rounding.
    if len(rts) == 0:
        return [lead]
    desc = np.poly(np.asarray(rts, dtype=complex))
    asc = desc[::-1].real * lead
    return list(asc)


@dataclass(frozen=True)
class RationalTF:
    """Reduced rational function in z with a monic denominator.

    ``num`` and ``den`` hold ascending-power real coefficients. Use
    :meth:`from_coeffs` to construct: it cancels common roots (tolerance
    ``REDUCE_TOL``), normalizes the leading denominator coefficient to 1 and
    rejects improper fractions with deg(num) > deg(den).
    """

    num: tuple[float, ...]
    den: tuple[float, ...]

    @classmethod
    def from_coeffs(cls, num, den) -> "RationalTF":
        num = _trim_high(num)
        den = _trim_high(den)
        if max(abs(c) for c in den) <= _ZERO_TOL:
            raise ValueError("denominator is identically zero")
        num_is_zero = max(abs(c) for c in num) <= _ZERO_TOL

        if not num_is_zero and len(num) > 1 and len(den) > 1:
            rn = list(np.roots(num[::-1]))
            rd = list(np.roots(den[::-1]))
            cancelled = False
            kept_n = []
            for r in rn:
                match = None
                for i, s in enumerate(rd):
                    if abs(r - s) <= REDUCE_TOL * max(1.0, abs(r)):
                        match = i
                        break
                if match is None:
                    kept_n.append(r)
                else:
                    rd.pop(match)
                    cancelled = True
            if cancelled:
                num = _poly_from_roots(kept_n, num[-1])
                den = _poly_from_roots(rd, den[-1])

        lead = den[-1]
        num = tuple(float(c) / lead for c in num)
        den = tuple(float(c) / lead for c in den)
        if len(num) - 1 > len(den) - 1:
            raise ValueError("numerator degree exceeds denominator degree")
        return cls(num=num, den=den)

    @property
    def num_degree(self) -> int:
        return len(self.num) - 1

    @property
    def den_degree(self) -> int:
        return len(self.den) - 1

    @property
    def strictly_proper(self) -> bool:
        return self.num_degree < self.den_degree


def _general_historical_tf(eta: float, a: tuple, b: tuple) -> RationalTF:
    horizon = len(a)
    # numerator -eta * sum_i a_i z^(T-i); ascending index T-i
    num = [0.0] * horizon
    for i, ai in enumerate(a, start=1):
        num[horizon - i] = -eta * ai
    den = [0.0] * (horizon + 1)
    den[horizon] = 1.0
    for i, bi in enumerate(b, start=1):
        den[horizon - i] -= bi
    return RationalTF.from_coeffs(num, den)


def _poly_mul(p, q):
    return list(np.convolve(p, q))


def _poly_add(p, q, sign=1.0):
    n = max(len(p), len(q))
    out = [0.0] * n
    for i, v in enumerate(p):
        out[i] += v
    for i, v in enumerate(q):
        out[i] += sign * v
    return out


def _poly_det(entries):
    # Laplace expansion along the first row; entries are ascending coefficient
    # lists, exact in float for the small state matrices used here.
    n = len(entries)
    if n == 1:
        return list(entries[0][0])
    acc = [0.0]
    for j in range(n):
        minor = [[row[k] for k in range(n) if k != j] for row in entries[1:]]
        term = _poly_mul(entries[0][j], _poly_det(minor))
        acc = _poly_add(acc, term, sign=(-1.0) ** j)
    return acc


def _state_space_tf(A, B, C) -> RationalTF:
    """Transfer function of x+ = A x + B v, u = C x (single input/output)."""
    A = np.asarray(A, dtype=float)
    closed = A - np.outer(np.asarray(B, float), np.asarray(C, float))

    def char_entries(M):
        n = M.shape[0]
        return [
            [[-M[i, j], 1.0] if i == j else [-M[i, j]] for j in range(n)]
            for i in range(n)
        ]

    den = _poly_det(char_entries(A))
    num = _poly_add(_poly_det(char_entries(closed)), den, sign=-1.0)
    return RationalTF.from_coeffs(num, den)


def _pegd_tf(eta: float) -> RationalTF:
    # State recursion of the past extra-gradient step: the grad of the stale
    # half-point is replayed once before the fresh evaluation enters.
    A = [[0.0, 1.0, -eta], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]
    B = [0.0, -eta, 1.0]
    C = [0.0, 1.0, -eta]
    return _state_space_tf(A, B, C)


def _rgd_tf(eta: float) -> RationalTF:
    # Reflected step: evaluate at the extrapolated point 2 x_k - x_{k-1}.
    A = [[0.0, 2.0, 1.0], [0.0, 1.0, 0.0], [0.0, 1.0, 0.0]]
    B = [0.0, -eta, 0.0]
    C = [0.0, 2.0, -1.0]
    return _state_space_tf(A, B, C)


def build_transfer(m: MethodSpec) -> RationalTF:
    """Transfer function of the controller realizing method ``m``."""
    if m.family == "gd":
        return RationalTF.from_coeffs([-m.eta], [-1.0, 1.0])
    if m.family == "ogd":
        return RationalTF.from_coeffs([m.eta, -2.0 * m.eta], [0.0, -1.0, 1.0])
    if m.family == "gogd":
        return RationalTF.from_coeffs(
            [m.beta, -(m.alpha + m.beta)], [0.0, -1.0, 1.0]
        )
    if m.family == "pp":
        return RationalTF.from_coeffs([0.0, -m.eta], [-1.0, 1.0])
    if m.family == "pid":
        num = [-m.kd, m.kp - m.ki + 2.0 * m.kd, -(m.kp + m.kd)]
        return RationalTF.from_coeffs(num, [0.0, -1.0, 1.0])
    if m.family == "hgd":
        ones = (1.0,) + (0.0,) * (m.horizon - 1)
        return _general_historical_tf(m.eta, m.a, ones)
    if m.family == "general":
        return _general_historical_tf(m.eta, m.a, m.b)
    if m.family == "pegd":
        return _pegd_tf(m.eta)
    if m.family == "rgd":
        return _rgd_tf(m.eta)
    raise ValueError(f"unknown method family {m.family!r}")


def complementary_sensitivity(k: RationalTF, h: float) -> RationalTF:
    """K / (1 - h K) in reduced, denominator-monic form."""
    if h == 0.0:
        return k
    shifted = _poly_add(list(k.den), [h * c for c in k.num], sign=-1.0)
    if max(abs(c) for c in shifted) <= _ZERO_TOL:
        raise ValueError("shifted denominator vanished")
    return RationalTF.from_coeffs(k.num, shifted)


def rho_scale(k: RationalTF, rho: float) -> RationalTF:
    """Substitute z -> rho z, i.e. coefficient c_i becomes c_i rho^i."""
    if not 0.0 < rho <= 1.0:
        raise ValueError("rho must lie in (0, 1]")
    num = [c * rho**i for i, c in enumerate(k.num)]
    den = [c * rho**i for i, c in enumerate(k.den)]
    return RationalTF.from_coeffs(num, den)


def tf_equal(a: RationalTF, b: RationalTF, tol: float = EQUAL_TOL) -> bool:
    """Equality of rational functions via cross-multiplied coefficients."""
    pa = np.convolve(a.num, b.den)
    pb = np.convolve(b.num, a.den)
    n = max(pa.size, pb.size)
    pa = np.pad(pa, (0, n - pa.size))
    pb = np.pad(pb, (0, n - pb.size))
    scale = max(np.max(np.abs(pa)), np.max(np.abs(pb)))
    if scale == 0.0:
        return True
    return bool(np.max(np.abs(pa - pb)) <= tol * scale)


def evaluate(k: RationalTF, z: complex) -> complex:
    """num(z) / den(z) by Horner evaluation; rejects evaluation at a pole."""
    nv = np.polynomial.polynomial.polyval(z, np.asarray(k.num))
    dv = np.polynomial.polynomial.polyval(z, np.asarray(k.den))
    scale = max(1.0, abs(z)) ** k.den_degree * max(abs(c) for c in k.den)
    if abs(dv) <= 1e-14 * scale:
        raise ZeroDivisionError(f"evaluation at a pole of the transfer function: z={z}")
    return complex(nv / dv)
