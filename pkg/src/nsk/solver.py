"""
Explicit pseudospectral integration of the isothermal NSK system.

The unknowns are ``rho`` and ``m = rho u``.  Every momentum term is written
as the divergence of a single flux tensor

    F = m (x) u + P I - S - K,     dm/dt = -div F,    drho/dt = -div m,

so mass and momentum are conserved to round-off.  Right-hand sides are
projected onto the two-thirds band; an initial state inside that band stays
there, which makes quadratic products alias-free.

The classical RK4 step also integrates the two running dissipation totals
as extra scalar unknowns, so the energy budget inherits fourth order.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np

from .diagnostics import DiagnosticsSeries, record, viscous_terms
from .errors import VacuumApproached
from .korteweg import tensor_ab
from .state import FlowState, Models

__all__ = [
    "FlowState",
    "Models",
    "compute_rhs",
    "stable_timestep",
    "advance",
    "run",
    "RunResult",
]


def _evaluate(rho, m, t, models, grid, forcing=None):
    """Dealiased ``(drho, dm)`` and the integrated dissipation rates."""
    rho_min = float(np.min(rho))
    if not rho_min >= models.floor:
        raise VacuumApproached(rho_min, models.floor, t)
    d = grid.dim
    u = m / rho
    flux = np.stack([np.stack([m[i] * u[j] for j in range(d)]) for i in range(d)])
    p = models.pressure.pressure(rho)
    for i in range(d):
        flux[i, i] += p
    if models.viscosity.inviscid:
        rates = (0.0, 0.0)
    else:
        mu, lam = models.viscosity(rho)
        stress, da, di = viscous_terms(grid, u, mu, lam)
        flux -= stress
        rates = (float(grid.integrate(da)), float(grid.integrate(di)))
    flux -= models.capillary_sign * tensor_ab(rho, models.capillarity, grid, models.rho_bar)
    drho = -grid.divergence(m)
    dm = -grid.divergence_tensor(flux)
    if forcing is not None:
        f_rho, f_m = forcing(t)
        drho = drho + f_rho
        dm = dm + f_m
    return grid.dealias(drho), grid.dealias(dm), rates


def compute_rhs(state, models, grid, forcing=None):
    """Time derivatives ``(drho/dt, dm/dt)`` of ``state``.

    Parameters
    ----------
    forcing : callable, optional
        ``forcing(t) -> (f_rho, f_m)`` added to the right-hand side.

    Raises
    ------
    VacuumApproached
        If ``min rho`` is below ``models.floor``.
    """
    drho, dm, _ = _evaluate(state.rho, state.momentum, state.time, models, grid, forcing)
    return drho, dm


def stable_timestep(state, models, grid, cfl=0.25):
    """Explicit step from the acoustic, viscous and capillary limits."""
    rho = state.rho
    dx = grid.dx
    u = state.velocity
    speed = np.sqrt(np.sum(u * u, axis=0)) + np.sqrt(models.pressure.pressure_prime(rho))
    limits = [dx / float(np.max(speed))]
    if not models.viscosity.inviscid:
        mu, lam = models.viscosity(rho)
        nu = float(np.max(2.0 * mu + np.abs(lam)))
        if nu > 0:
            limits.append(float(np.min(rho)) * dx ** 2 / (4.0 * nu))
    cap = float(np.max(rho * models.capillarity.kappa(rho)))
    limits.append(dx ** 2 / (2.0 * math.pi * math.sqrt(cap)))
    return cfl * min(limits)


def _rk4(rho, m, w, t, dt, models, grid, forcing):
    def f(r, q, s):
        dr, dq, rates = _evaluate(r, q, s, models, grid, forcing)
        return dr, dq, np.asarray(rates)

    k1 = f(rho, m, t)
    k2 = f(rho + 0.5 * dt * k1[0], m + 0.5 * dt * k1[1], t + 0.5 * dt)
    k3 = f(rho + 0.5 * dt * k2[0], m + 0.5 * dt * k2[1], t + 0.5 * dt)
    k4 = f(rho + dt * k3[0], m + dt * k3[1], t + dt)
    out = []
    for i, y in enumerate((rho, m, w)):
        out.append(y + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]))
    return out


def advance(state, dt, models, grid, forcing=None):
    """One classical RK4 step."""
    rho, m, _ = _rk4(state.rho, state.momentum, np.zeros(2), state.time, dt,
                     models, grid, forcing)
    return FlowState(rho, m, state.time + dt)


@dataclass
class RunResult:
    state: FlowState
    series: DiagnosticsSeries
    reason: str
    steps: int
    error: Optional[str] = None
    states: list = field(default_factory=list)


def run(state, models, grid, t_end, output_interval, cfl=0.25, substeps=None,
        forcing=None, keep_states=False, ball_radius=None,
        callback: Optional[Callable] = None):
    """Integrate from ``state`` to ``t_end`` recording diagnostics.

    Rows are written at every multiple of ``output_interval`` up to
    ``t_end``.  Each interval is split into ``substeps`` equal RK4 steps;
    when ``substeps`` is ``None`` the count is chosen from
    :func:`stable_timestep` at the start of the interval.

    A :class:`VacuumApproached` event stops the run; the result then holds
    the series up to the last completed output and ``reason`` is
    ``"vacuum"``.
    """
    if not t_end >= 0:
        raise ValueError("t_end must be nonnegative")
    if not output_interval > 0:
        raise ValueError("output_interval must be positive")
    series = DiagnosticsSeries(dim=grid.dim)
    current = state.copy()
    w = np.zeros(2)
    record(series, current, w, models, grid, ball_radius)
    states = [current.copy()] if keep_states else []
    n_out = int(math.floor(t_end / output_interval + 1e-9))
    t0 = current.time
    marks = [t0 + k * output_interval for k in range(1, n_out + 1)]
    if not marks or marks[-1] < t0 + t_end - 1e-12:
        marks.append(t0 + t_end)
    steps = 0
    reason = "completed"
    error = None
    for k, target in enumerate(marks):
        span = target - current.time
        if span <= 0:
            continue
        if substeps is None:
            dt0 = stable_timestep(current, models, grid, cfl)
            nsub = max(1, int(math.ceil(span / dt0 - 1e-12)))
        else:
            nsub = int(substeps)
        dt = span / nsub
        rho, m, t = current.rho, current.momentum, current.time
        try:
            for _ in range(nsub):
                rho, m, w = _rk4(rho, m, w, t, dt, models, grid, forcing)
                t += dt
                steps += 1
                if not (np.all(np.isfinite(rho)) and np.all(np.isfinite(m))):
                    raise FloatingPointError(f"non-finite state at t={t:.6g}")
        except VacuumApproached as exc:
            reason, error = "vacuum", str(exc)
            break
        except FloatingPointError as exc:
            reason, error = "blowup", str(exc)
            break
        current = FlowState(rho, m, target)
        if k < n_out:
            record(series, current, w, models, grid, ball_radius)
            if keep_states:
                states.append(current.copy())
        if callback is not None:
            callback(current, series)
    return RunResult(current, series, reason, steps, error, states)
