"""Time-domain simulation of the analyzed update rules under adversarial noise."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .operators import OperatorSpec, derived_sector, eval_operator
from .transfer import MethodSpec

DIVERGENCE_FACTOR = 1e6
RATE_FLOOR = 1e-13
IMPLICIT_TOL = 1e-12
IMPLICIT_MAX_ITER = 200

STRATEGIES = ("none", "scale_up", "scale_down", "rotate", "random")


@dataclass(frozen=True)
class NoiseAdversary:
    """Relative deterministic noise r with ||r|| <= delta ||F(x)||.

    scale_up/scale_down stretch the observed value by (1 +- delta); rotate
    adds an orthogonal component of exactly delta ||F||; random picks a
    seeded uniform direction of the same magnitude.
    """

    strategy: str
    delta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        name = "random" if self.strategy == "seeded_random" else self.strategy
        object.__setattr__(self, "strategy", name)
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown noise strategy {self.strategy!r}")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")


def apply_noise(adv: NoiseAdversary, value, k: int) -> np.ndarray:
    """Observed operator value at evaluation index ``k``."""
    value = np.asarray(value, dtype=float)
    if adv.strategy == "none" or adv.delta == 0.0:
        return value
    if adv.strategy == "scale_up":
        return (1.0 + adv.delta) * value
    if adv.strategy == "scale_down":
        return (1.0 - adv.delta) * value
    norm = float(np.linalg.norm(value))
    if norm == 0.0:
        return value
    if adv.strategy == "rotate":
        if value.size == 1:
            return value
        u = np.zeros_like(value)
        u[0], u[1] = -value[1], value[0]
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            u[0], u[1] = 1.0, 0.0
            nu = 1.0
        return value + adv.delta * norm * (u / nu)
    rng = np.random.default_rng((adv.seed, k))
    g = rng.standard_normal(value.size)
    while float(np.linalg.norm(g)) == 0.0:
        g = rng.standard_normal(value.size)
    return value + adv.delta * norm * (g / np.linalg.norm(g))


@dataclass
class Trajectory:
    """Iterate history with distances to the fixed point."""

    points: list = field(default_factory=list)
    distances: list = field(default_factory=list)
    diverged: bool = False
    half_points: list | None = None


def _lag_coefficients(m: MethodSpec) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Iterate weights b and gradient weights c of the explicit update
    x+ = sum b_i x_(k-i) - sum c_i s_(k-i)."""
    if m.family == "gd":
        return (1.0,), (m.eta,)
    if m.family == "ogd":
        return (1.0, 0.0), (2.0 * m.eta, -m.eta)
    if m.family == "gogd":
        return (1.0, 0.0), (m.alpha + m.beta, -m.beta)
    if m.family == "hgd":
        b = (1.0,) + (0.0,) * (m.horizon - 1)
        return b, tuple(m.eta * ai for ai in m.a)
    if m.family == "general":
        return m.b, tuple(m.eta * ai for ai in m.a)
    raise ValueError(f"{m.family} has no explicit lag form")


def _implicit_solve(op, rhs, coeff, observe_fixed, tol_ref):
    """Solve x = rhs - coeff * F_obs(x) by damped fixed-point iteration."""
    try:
        sec = derived_sector(op)
        span = sec.mu + sec.L
    except ValueError:
        span = 2.0 * float(np.linalg.norm(op.linear_map(), 2))
    tau = 2.0 / (2.0 + abs(coeff) * span)
    x = np.array(rhs, dtype=float)
    tol = IMPLICIT_TOL * (1.0 + float(np.linalg.norm(tol_ref)))
    for _ in range(IMPLICIT_MAX_ITER):
        res = x - rhs + coeff * observe_fixed(x)
        if float(np.linalg.norm(res)) <= tol:
            return x
        x = x - tau * res
    raise RuntimeError("implicit step did not reach the residual tolerance")


def _implicit_step(op, adv, counter, rhs, coeff):
    """One implicit update x = rhs - coeff * F_obs(x); closed-form resolvent
    for linear operators under scaling noise, damped iteration otherwise."""
    idx = next(counter)
    linear = op.kind in ("diagonal-quadratic", "bilinear", "minmax-quadratic")
    if linear and adv.strategy in ("none", "scale_up", "scale_down"):
        scale = 1.0
        if adv.strategy == "scale_up":
            scale += adv.delta
        elif adv.strategy == "scale_down":
            scale -= adv.delta
        M = op.linear_map()
        fp = np.asarray(op.fixed_point)
        w = np.linalg.solve(np.eye(op.dimension) + coeff * scale * M, rhs - fp)
        return fp + w

    def observe_fixed(x):
        return apply_noise(adv, eval_operator(op, x), idx)

    return _implicit_solve(op, rhs, coeff, observe_fixed, rhs)


def run(
    method: MethodSpec,
    op: OperatorSpec,
    x0,
    steps: int,
    adversary: NoiseAdversary | None = None,
    mode: str = "simultaneous",
    history=None,
) -> Trajectory:
    """Iterate ``method`` on ``op`` for ``steps`` updates.

    Every operator evaluation is filtered through the adversary. History
    methods replicate ``x0`` across all lags unless ``history`` supplies the
    earlier iterates (most recent first); for the half-step families the
    single history entry is the stale evaluation point. Non-finite iterates
    or growth beyond ``DIVERGENCE_FACTOR`` times the initial distance mark
    the trajectory diverged and stop it.
    """
    if adversary is None:
        adversary = NoiseAdversary("none", 0.0)
    if steps < 1:
        raise ValueError("steps must be positive")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (op.dimension,):
        raise ValueError("x0 dimension mismatch")
    fp = np.asarray(op.fixed_point)
    counter = itertools.count()

    def observe(x):
        return apply_noise(adversary, eval_operator(op, x), next(counter))

    if mode == "alternating":
        if op.kind != "bilinear":
            raise ValueError("alternating mode requires a bilinear operator")
        if method.family != "ogd":
            raise ValueError("alternating mode is defined for the ogd family")
        if history is not None:
            raise ValueError("alternating mode does not take explicit history")
        return _run_alternating(method, op, x0, steps, adversary, counter)
    if mode != "simultaneous":
        raise ValueError(f"unknown mode {mode!r}")

    traj = Trajectory()
    traj.points.append(np.array(x0))
    traj.distances.append(float(np.linalg.norm(x0 - fp)))
    base = max(traj.distances[0], 1e-12)

    def record(x) -> bool:
        traj.points.append(np.array(x))
        if not np.all(np.isfinite(x)):
            traj.distances.append(float("inf"))
            traj.diverged = True
            return False
        d = float(np.linalg.norm(x - fp))
        traj.distances.append(d)
        if d > DIVERGENCE_FACTOR * base:
            traj.diverged = True
            return False
        return True

    fam = method.family
    if fam in ("gd", "ogd", "gogd", "hgd", "general"):
        b, c = _lag_coefficients(method)
        _run_lagged(op, x0, steps, b, c, history, observe, record)
    elif fam in ("pp", "pid"):
        _run_implicit(method, op, x0, steps, adversary, counter, history, observe, record)
    elif fam == "pegd":
        traj.half_points = _run_past_extragradient(
            method, op, x0, steps, history, observe, record
        )
    elif fam == "rgd":
        traj.half_points = _run_reflected(method, op, x0, steps, history, observe, record)
    else:
        raise ValueError(f"simulation not defined for family {fam!r}")
    return traj


def _init_states(x0, horizon, history):
    if history is None:
        return [np.array(x0) for _ in range(horizon)], True
    history = [np.asarray(h, dtype=float) for h in history]
    if len(history) != horizon - 1:
        raise ValueError(f"history must supply exactly {horizon - 1} earlier iterates")
    return [np.array(x0)] + history, False


def _run_lagged(op, x0, steps, b, c, history, observe, record):
    horizon = len(b)
    X, replicated = _init_states(x0, horizon, history)
    if replicated:
        s0 = observe(x0)
        S = [np.array(s0) for _ in range(horizon)]
    else:
        S = [None] * horizon
        for i in range(horizon - 1, -1, -1):  # oldest lag first
            S[i] = observe(X[i])
    for _ in range(steps):
        new_x = b[0] * X[0]
        for i in range(1, horizon):
            new_x = new_x + b[i] * X[i]
        for i in range(horizon):
            new_x = new_x - c[i] * S[i]
        if not record(new_x):
            return
        X = [new_x] + X[:-1]
        S = [observe(new_x)] + S[:-1]


def _run_implicit(method, op, x0, steps, adv, counter, history, observe, record):
    if method.family == "pp":
        coeff = method.eta
        lag_c = ()
        horizon = 1
    else:
        coeff = method.kp + method.kd
        if coeff < 0:
            raise ValueError("implicit step needs kp + kd >= 0")
        lag_c = (-method.kp + method.ki - 2.0 * method.kd, method.kd)
        horizon = 2
    X, replicated = _init_states(x0, horizon, history)
    if horizon > 1:
        if replicated:
            s0 = observe(x0)
            S = [np.array(s0) for _ in range(horizon)]
        else:
            S = [None] * horizon
            for i in range(horizon - 1, -1, -1):
                S[i] = observe(X[i])
    else:
        S = []
    for _ in range(steps):
        rhs = np.array(X[0])
        for i, ci in enumerate(lag_c):
            rhs = rhs - ci * S[i]
        if coeff == 0.0:
            new_x = rhs
        else:
            new_x = _implicit_step(op, adv, counter, rhs, coeff)
        if not record(new_x):
            return
        X = [new_x] + X[:-1]
        if horizon > 1:
            S = [observe(new_x)] + S[:-1]


def _run_past_extragradient(method, op, x0, steps, history, observe, record):
    eta = method.eta
    stale_point = np.asarray(history[0], dtype=float) if history else np.array(x0)
    if history is not None and len(history) != 1:
        raise ValueError("past extra-gradient takes one stale half point")
    s_prev = observe(stale_point)
    halves = []
    x = np.array(x0)
    for _ in range(steps):
        half = x - eta * s_prev
        halves.append(half)
        s_half = observe(half)
        new_x = x - eta * s_half
        if not record(new_x):
            return halves
        x = new_x
        s_prev = s_half
    return halves


def _run_reflected(method, op, x0, steps, history, observe, record):
    eta = method.eta
    if history is not None and len(history) != 1:
        raise ValueError("reflected step takes one earlier iterate")
    x_prev = np.asarray(history[0], dtype=float) if history else np.array(x0)
    halves = []
    x = np.array(x0)
    for _ in range(steps):
        half = 2.0 * x - x_prev
        halves.append(half)
        new_x = x - eta * observe(half)
        if not record(new_x):
            return halves
        x_prev = x
        x = new_x
    return halves


def _run_alternating(method, op, x0, steps, adv, counter):
    eta = method.eta
    A = np.asarray(op.matrix, dtype=float)
    n = A.shape[0]
    x, y = np.array(x0[:n]), np.array(x0[n:])

    def obs(v):
        return apply_noise(adv, v, next(counter))

    traj = Trajectory()
    traj.points.append(np.array(x0))
    traj.distances.append(float(np.linalg.norm(x0)))
    base = max(traj.distances[0], 1e-12)
    gx_prev = obs(A @ y)
    gy_prev = obs(A.T @ x)
    for _ in range(steps):
        gx = obs(A @ y)
        x_new = x - 2.0 * eta * gx + eta * gx_prev
        gy = obs(A.T @ x_new)
        y_new = y + 2.0 * eta * gy - eta * gy_prev
        point = np.concatenate([x_new, y_new])
        traj.points.append(point)
        if not np.all(np.isfinite(point)):
            traj.distances.append(float("inf"))
            traj.diverged = True
            return traj
        d = float(np.linalg.norm(point))
        traj.distances.append(d)
        if d > DIVERGENCE_FACTOR * base:
            traj.diverged = True
            return traj
        x, y = x_new, y_new
        gx_prev, gy_prev = gx, gy
    return traj


def estimate_rate(t: Trajectory, burn_in: int | None = None) -> float:
    """Per-step contraction factor from a log-linear fit of the distances.

    The first ``burn_in`` points (default: 20 percent) absorb the transient;
    distances at or below ``RATE_FLOOR`` are ignored. Raises when the
    trajectory diverged or fewer than 20 usable points remain.
    """
    if t.diverged:
        raise ValueError("rate undefined for a diverged trajectory")
    dists = np.asarray(t.distances, dtype=float)
    n = dists.size
    if burn_in is None:
        burn_in = n // 5
    ks = np.arange(n)[burn_in:]
    ds = dists[burn_in:]
    mask = ds > RATE_FLOOR
    if int(mask.sum()) < 20:
        raise ValueError("insufficient decay data for a rate estimate")
    slope = np.polyfit(ks[mask], np.log(ds[mask]), 1)[0]
    return float(np.exp(slope))
