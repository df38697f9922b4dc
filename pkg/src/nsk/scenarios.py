"""
Initial data for the scenario library.

Random scenarios draw a fixed set of Fourier coefficients from the seed and
evaluate them on the grid, so the same seed gives the same continuous field
at every resolution.  That keeps refinement studies meaningful.
"""

import numpy as np

from .manufactured import ManufacturedSolution
from .state import FlowState

__all__ = ["smooth_field", "build_initial", "initial_norms"]


def smooth_field(grid, rng, kmax=3):
    """Trigonometric polynomial with modes ``|k_i| <= kmax`` and ``max|f| = 1``.

    Coefficients decay like ``exp(-|k|)`` and the mean is removed.
    """
    ks = np.arange(-kmax, kmax + 1)
    modes = np.stack(np.meshgrid(*[ks] * grid.dim, indexing="ij"), axis=-1).reshape(-1, grid.dim)
    modes = modes[np.any(modes != 0, axis=1)]
    amp = np.exp(-np.linalg.norm(modes, axis=1))
    a = rng.standard_normal(len(modes)) * amp
    b = rng.standard_normal(len(modes)) * amp
    scale = 2 * np.pi / grid.length
    x = grid.coordinates
    f = np.zeros(grid.shape)
    for k, ak, bk in zip(modes, a, b):
        phase = scale * sum(int(k[i]) * x[i] for i in range(grid.dim))
        f += ak * np.cos(phase) + bk * np.sin(phase)
    return f / np.max(np.abs(f))


def _random_state(cfg, grid, kmax=3):
    rng = np.random.default_rng(cfg.seed)
    rb = cfg.rho_bar
    rho = rb * (1.0 + cfg.amplitude * smooth_field(grid, rng, kmax))
    u = np.stack([cfg.amplitude * smooth_field(grid, rng, kmax) for _ in range(grid.dim)])
    return rho, u


def build_initial(cfg, grid, models):
    """Initial :class:`FlowState` for ``cfg.scenario``.

    The state is projected onto the two-thirds band before it is returned.
    """
    sid = cfg.scenario
    rb = cfg.rho_bar
    x = grid.coordinates
    if sid in ("small-data-2d", "critical-capillarity", "large-kappa"):
        rho, u = _random_state(cfg, grid)
    elif sid == "large-data-1d":
        k = cfg.wavenumber
        rho = rb * (1.0 + cfg.amplitude * np.sin(k * x[0]))
        u = (cfg.amplitude * np.cos(k * x[0]))[None]
    elif sid == "vacuum-approach":
        # density well of depth rho_bar - rho_min centred at L/2, outflow velocity
        rho_min = cfg.floor_multiple * cfg.floor
        c = 2 * np.pi / grid.length
        well = (0.5 * (1.0 - np.cos(c * x[0]))) ** 4
        rho = rb - (rb - rho_min) * well
        u = (-cfg.amplitude * np.sin(c * x[0]))[None]
        # exact trigonometric polynomial of degree 4: no projection needed
        return FlowState(rho, rho * u, 0.0)
    elif sid == "manufactured":
        return ManufacturedSolution(grid, models, cfg.amplitude).exact(0.0)
    else:
        raise ValueError(f"unknown scenario {sid!r}")
    rho = grid.dealias(rho)
    m = grid.dealias(rho * u)
    return FlowState(rho, m, 0.0)


def initial_norms(state, models, grid):
    """Norms entering the smallness and large-capillarity hypotheses."""
    rho = state.rho
    u = state.velocity
    grad_rho = grid.gradient(rho)
    gA = grid.gradient(models.capillarity.A(rho, models.rho_bar))
    return {
        "grad_rho_L2": grid.l2_norm(grad_rho),
        "sqrt_rho_u_L2": grid.l2_norm(np.sqrt(rho) * u),
        "j_gamma_L1": float(grid.integrate(np.abs(models.pressure.j_gamma(rho)))),
        "grad_A_L2": grid.l2_norm(gA),
        "rho_min": float(np.min(rho)),
    }
