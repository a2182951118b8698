"""Classical fourth-order Runge-Kutta integration of the semi-discrete system.

Works with any state supporting ``+`` and scalar ``*`` (broken polynomials,
ndarrays, plain floats), so scalar surrogate problems can exercise the exact
RK4 amplification factor.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import InvalidConfigError, NonFiniteError
from .poly import PiecewisePoly


def _all_finite(state) -> bool:
    if isinstance(state, PiecewisePoly):
        return bool(np.all(np.isfinite(state.coeffs)))
    return bool(np.all(np.isfinite(state)))


def rk4_step(u, t: float, dt: float, rhs):
    """One classical RK4 step: stages at t, t+dt/2, t+dt/2, t+dt."""
    if dt <= 0.0:
        raise InvalidConfigError(f"time step must be positive, got {dt}")
    k1 = rhs(u, t)
    k2 = rhs(u + (0.5 * dt) * k1, t + 0.5 * dt)
    k3 = rhs(u + (0.5 * dt) * k2, t + 0.5 * dt)
    k4 = rhs(u + dt * k3, t + dt)
    out = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not _all_finite(out):
        raise NonFiniteError(f"solution became non-finite during the step at t = {t}")
    return out


def integrate_to(u0, t0: float, t_final: float, dt_nominal: float, rhs):
    """March from t0 to t_final in uniform steps, shortening only the last one.

    The step count is ceil((t_final - t0) / dt_nominal); stage times are
    computed from the step index, not accumulated, to avoid drift.
    """
    if t_final <= t0:
        raise InvalidConfigError(f"t_final = {t_final} must exceed t0 = {t0}")
    if dt_nominal <= 0.0:
        raise InvalidConfigError(f"nominal step must be positive, got {dt_nominal}")
    span = t_final - t0
    n_steps = max(1, math.ceil(span / dt_nominal - 1e-9))
    u = u0
    for m in range(n_steps):
        t = t0 + m * dt_nominal
        dt = dt_nominal if m < n_steps - 1 else t_final - t
        try:
            u = rk4_step(u, t, dt, rhs)
        except NonFiniteError as exc:
            raise NonFiniteError(f"{exc} (step {m + 1} of {n_steps})") from None
    return u
