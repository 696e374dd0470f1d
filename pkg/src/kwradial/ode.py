"""Autonomous form of the reduced equations, its first integral, and an integrator.

With ``s = ln t``, ``u~(s) = t f(t) - 1/2`` and ``v~(s) = t g(t)`` the
twisted system at parameter ``lam`` becomes autonomous::

    a u~' =  b P - Q
    a v~' = -b Q - P

where ``a = (lam + 1/lam)/2``, ``b = (lam - 1/lam)/2``,
``P = u~^2 - v~^2 - 1/4`` and ``Q = 2 u~ v~``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .families import SolutionFamily, f1_rational, profile


class InvalidLambdaError(ValueError):
    pass


@dataclass(frozen=True)
class AutonomousState:
    u: float
    v: float
    s: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=float)

    def to_json(self) -> dict:
        return {"u_tilde": self.u, "v_tilde": self.v, "s": self.s}


@dataclass
class Trajectory:
    lam: float
    s: np.ndarray
    u: np.ndarray
    v: np.ndarray
    first_integral: np.ndarray
    n_accepted: int = 0
    n_rejected: int = 0
    max_error: float = 0.0
    blown_up: bool = False
    meta: dict = field(default_factory=dict)

    COLUMNS = ("s", "u_tilde", "v_tilde", "first_integral")

    @property
    def final(self) -> AutonomousState:
        return AutonomousState(float(self.u[-1]), float(self.v[-1]), float(self.s[-1]))

    def rows(self) -> np.ndarray:
        return np.column_stack([self.s, self.u, self.v, self.first_integral])

    def stats(self) -> dict:
        return {
            "n_accepted": self.n_accepted,
            "n_rejected": self.n_rejected,
            "max_error": self.max_error,
            "blown_up": self.blown_up,
        }


def _coeffs(lam: float) -> tuple[float, float]:
    lam = float(lam)
    if lam == 0.0 or not math.isfinite(lam):
        raise InvalidLambdaError(f"lam must be real, finite and nonzero, got {lam}")
    a = 0.5 * (lam + 1.0 / lam)
    if a == 0.0:
        raise InvalidLambdaError("lam + 1/lam vanishes")
    return a, 0.5 * (lam - 1.0 / lam)


def _rhs(a: float, b: float, y: np.ndarray) -> np.ndarray:
    u, v = y
    p = u * u - v * v - 0.25
    q = 2.0 * u * v
    return np.array([(b * p - q) / a, (-b * q - p) / a])


def autonomous_rhs(lam: float, st: AutonomousState) -> tuple[float, float]:
    a, b = _coeffs(lam)
    du, dv = _rhs(a, b, st.as_array())
    return float(du), float(dv)


def first_integral(lam: float, st: AutonomousState | np.ndarray) -> float | np.ndarray:
    """``u^3/3 - u v^2 - u/4 - b (v^3/3 - u^2 v + v/4)``.

    This is ``Re`` and ``Im`` of ``(u + i v)^3/3 - (u + i v)/4`` combined
    with weight ``b``; differentiating along the flow gives zero for every
    real nonzero ``lam``.
    """
    _, b = _coeffs(lam)
    if isinstance(st, AutonomousState):
        u, v = st.u, st.v
    else:
        u, v = np.asarray(st, dtype=float)[..., 0], np.asarray(st, dtype=float)[..., 1]
    return u ** 3 / 3.0 - u * v * v - 0.25 * u - b * (v ** 3 / 3.0 - u * u * v + 0.25 * v)


# Dormand-Prince 5(4)
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def _step(fun, y, h, k0):
    k = [k0]
    for i in range(1, 7):
        yi = y + h * sum(a * kj for a, kj in zip(_A[i], k))
        k.append(fun(yi))
    y_new = y + h * sum(b * kj for b, kj in zip(_B5, k))
    err = h * sum(e * kj for e, kj in zip(_E, k))
    return y_new, float(np.max(np.abs(err))), k[-1]


def integrate(lam: float, init: AutonomousState, s_end: float, tol: float = 1e-10,
              h0: float | None = None, max_steps: int = 1_000_000) -> Trajectory:
    """Adaptive Dormand-Prince integration of the autonomous system.

    Every accepted step has an embedded error estimate ``<= tol`` (absolute,
    max norm).  Step size follows a PI controller.  When the step underflows
    ``1e-14 * |s_end - s_start|`` or the state stops being finite, the
    trajectory is returned truncated with ``blown_up=True``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a, b = _coeffs(lam)
    y = init.as_array()
    if not np.all(np.isfinite(y)):
        raise ValueError("initial state must be finite")
    fun = lambda z: _rhs(a, b, z)
    s0, s = float(init.s), float(init.s)
    span = float(s_end) - s0
    direction = 1.0 if span >= 0 else -1.0
    h_min = 1e-14 * abs(span)
    h = abs(h0) if h0 else min(abs(span), 1e-2) or 1e-2
    ss, us, vs = [s], [y[0]], [y[1]]
    n_acc = n_rej = 0
    max_err = 0.0
    err_prev = tol
    blown = False
    k0 = fun(y)
    safety, beta1, beta2 = 0.9, 0.7 / 5, 0.4 / 5
    while direction * (s_end - s) > 0:
        if n_acc + n_rej >= max_steps:
            raise RuntimeError("integrate: step budget exhausted")
        h = min(h, abs(s_end - s))
        if h < h_min:
            blown = True
            break
        y_new, err, k_last = _step(fun, y, direction * h, k0)
        if not np.all(np.isfinite(y_new)) or not math.isfinite(err):
            n_rej += 1
            h *= 0.2
            continue
        if err <= tol:
            s += direction * h
            y = y_new
            k0 = k_last
            n_acc += 1
            max_err = max(max_err, err)
            ss.append(s)
            us.append(y[0])
            vs.append(y[1])
            e = max(err, 1e-300)
            # PI control: proportional on this error, integral on the last one
            fac = safety * (tol / e) ** beta1 * (err_prev / tol) ** beta2
            h *= min(5.0, max(0.2, fac))
            err_prev = max(err, 1e-4 * tol)
        else:
            n_rej += 1
            h *= max(0.2, safety * (tol / err) ** 0.2)
    traj_y = np.column_stack([us, vs])
    return Trajectory(
        lam=float(lam),
        s=np.array(ss),
        u=traj_y[:, 0],
        v=traj_y[:, 1],
        first_integral=np.asarray(first_integral(lam, traj_y)),
        n_accepted=n_acc,
        n_rejected=n_rej,
        max_error=max_err,
        blown_up=blown,
        meta={"tol": tol, "s_end": float(s_end)},
    )


def w_branch(C: float, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    ct = C * t
    return 0.5 * (ct * ct - 2.0 * ct + 1.0) / (ct * ct + 4.0 * ct + 1.0)


def branch_identity_check(C: float, t) -> np.ndarray:
    """``W(ln t) + u~`` on the first branch; identically zero."""
    t = np.asarray(t, dtype=float)
    u = f1_rational(C).times_t()(t) - 0.5
    return w_branch(C, t) + u


def cubic_orbit_residual(st: AutonomousState | np.ndarray):
    """``12 v^2 u - (2u + 1)^2 (u - 1)``; zero on the lam = -1 orbit through (-1/2, 0)."""
    if isinstance(st, AutonomousState):
        u, v = st.u, st.v
    else:
        arr = np.asarray(st, dtype=float)
        u, v = arr[..., 0], arr[..., 1]
    return 12.0 * v * v * u - (2.0 * u + 1.0) ** 2 * (u - 1.0)


def equilibria(lam: float) -> list[AutonomousState]:
    # P = Q = 0 for every admissible lam since the linear map (P, Q) -> rhs is invertible
    _coeffs(lam)
    return [AutonomousState(-0.5, 0.0), AutonomousState(0.5, 0.0)]


def jacobian(lam: float, st: AutonomousState, eps: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the vector field."""
    a, b = _coeffs(lam)
    y = st.as_array()
    jac = np.empty((2, 2))
    for j in range(2):
        d = np.zeros(2)
        d[j] = eps
        jac[:, j] = (_rhs(a, b, y + d) - _rhs(a, b, y - d)) / (2.0 * eps)
    return jac


def orbit_state(fam: SolutionFamily, t: float) -> AutonomousState:
    """``(t f - 1/2, t g)`` at ``s = ln t`` for a catalog profile."""
    p = profile(fam)
    t = float(p.check(t))
    return AutonomousState(float(p.tilde_f(t)) - 0.5, float(t * p.g(t)), math.log(t))


def orbit_states(fam: SolutionFamily, t) -> np.ndarray:
    p = profile(fam)
    t = p.check(t)
    return np.column_stack([p.tilde_f(t) - 0.5, t * p.g(t)])
