"""
Capillary (Korteweg) stress in two independent formulations.

The primitive route differentiates ``rho`` directly,

    div K = grad(rho kappa Lap rho + (kappa + rho kappa')|grad rho|^2 / 2)
            - div(kappa grad rho (x) grad rho),

while the A/B route assembles the tensor from the antiderivatives of
:mod:`nsk.constitutive`,

    K = (Lap B - (kappa + rho kappa')|grad rho|^2 / 2) I - grad A (x) grad A.

The two share no intermediate arrays beyond ``grad rho`` being recomputed,
so their agreement is a genuine consistency check.
"""

from dataclasses import dataclass

import numpy as np

from .constitutive import Critical, PowerLaw, _positive

__all__ = [
    "KortewegOutput",
    "divK_primitive",
    "tensor_ab",
    "tensor_power_law_constants",
    "tensor_log_form",
    "korteweg",
    "equivalence_residual",
    "capillary_energy",
    "capillary_power_terms",
    "capillary_power_residual",
]


@dataclass
class KortewegOutput:
    tensor: np.ndarray
    force: np.ndarray
    capillary_energy: float


def _outer(grid, a, b):
    d = grid.dim
    return np.stack([np.stack([a[i] * b[j] for j in range(d)]) for i in range(d)])


def _identity_times(grid, scalar):
    d = grid.dim
    out = np.zeros((d, d) + grid.shape)
    for i in range(d):
        out[i, i] = scalar
    return out


def divK_primitive(rho, model, grid, dealias=True):
    """Capillary force from derivatives of ``rho``."""
    rho = _positive(rho)
    kap = model.kappa(rho)
    kp = model.kappa_prime(rho)
    g = grid.gradient(rho)
    g2 = np.sum(g * g, axis=0)
    scalar = rho * kap * grid.laplacian(rho) + 0.5 * (kap + rho * kp) * g2
    flux = _outer(grid, g, g) * kap
    force = grid.gradient(scalar) - grid.divergence_tensor(flux)
    return grid.dealias(force) if dealias else force


def tensor_ab(rho, model, grid, rho_bar=1.0):
    """Korteweg tensor built from ``A(rho)`` and ``B(rho)``."""
    rho = _positive(rho)
    gA = grid.gradient(model.A(rho, rho_bar))
    lapB = grid.laplacian(model.B(rho, rho_bar))
    g = grid.gradient(rho)
    coef = 0.5 * (model.kappa(rho) + rho * model.kappa_prime(rho))
    diag = lapB - coef * np.sum(g * g, axis=0)
    return _identity_times(grid, diag) - _outer(grid, gA, gA)


def tensor_power_law_constants(rho, model, grid):
    """Tensor for ``kappa rho**alpha`` written with the classical constants.

    ``K = (A1 Lap rho^(2+a) - A2 |grad rho^(a/2+1)|^2) I
          - B grad rho^(a/2+1) (x) grad rho^(a/2+1)``.
    """
    if not isinstance(model, PowerLaw):
        raise TypeError("needs a PowerLaw model")
    rho = _positive(rho)
    a1, a2, b = model.paper_constants()
    a = model.alpha
    gA = grid.gradient(rho ** (0.5 * a + 1))
    diag = a1 * grid.laplacian(rho ** (2 + a)) - a2 * np.sum(gA * gA, axis=0)
    return _identity_times(grid, diag) - b * _outer(grid, gA, gA)


def tensor_log_form(rho, model, grid):
    """Tensor for ``kappa / rho**2`` written with ``log rho``."""
    if not isinstance(model, Critical):
        raise TypeError("needs a Critical model")
    lr = np.log(_positive(rho))
    g = grid.gradient(lr)
    diag = grid.laplacian(lr) + 0.5 * np.sum(g * g, axis=0)
    return model.kappa_coef * (_identity_times(grid, diag) - _outer(grid, g, g))


def capillary_energy(rho, model, grid):
    """``int kappa(rho) |grad rho|^2 / 2``."""
    g = grid.gradient(_positive(rho))
    return float(grid.integrate(0.5 * model.kappa(rho) * np.sum(g * g, axis=0)))


def korteweg(rho, model, grid, rho_bar=1.0, dealias=True):
    tensor = tensor_ab(rho, model, grid, rho_bar)
    if not np.allclose(tensor, np.swapaxes(tensor, 0, 1), rtol=0, atol=0):
        raise AssertionError("Korteweg tensor is not symmetric")
    force = grid.divergence_tensor(tensor)
    if dealias:
        force = grid.dealias(force)
    return KortewegOutput(tensor, force, capillary_energy(rho, model, grid))


def equivalence_residual(rho, model, grid, rho_bar=1.0):
    """Relative L2 gap between ``div tensor_ab`` and :func:`divK_primitive`."""
    ab = grid.divergence_tensor(tensor_ab(rho, model, grid, rho_bar))
    prim = divK_primitive(rho, model, grid, dealias=False)
    diff = grid.l2_norm(ab - prim)
    scale = max(grid.l2_norm(ab), grid.l2_norm(prim))
    if scale == 0.0:
        return 0.0
    return diff / scale


def capillary_power_terms(rho, u, model, grid):
    """Both sides of the capillary energy exchange.

    Returns ``(work, rate)`` with ``work = int div K . u`` and ``rate`` the
    time derivative of the capillary energy along ``rho_t = -div(rho u)``.
    The identity is ``work = -rate``.
    """
    rho = _positive(rho)
    force = divK_primitive(rho, model, grid, dealias=False)
    work = float(grid.integrate(np.sum(force * u, axis=0)))
    rho_t = -grid.divergence(rho * u)
    g = grid.gradient(rho)
    g_t = grid.gradient(rho_t)
    dens = (0.5 * model.kappa_prime(rho) * np.sum(g * g, axis=0) * rho_t
            + model.kappa(rho) * np.sum(g * g_t, axis=0))
    rate = float(grid.integrate(dens))
    return work, rate


def capillary_power_residual(rho, u, model, grid, relative=True):
    """``int div K . u + d/dt int kappa |grad rho|^2 / 2``.

    With ``relative`` the residual is divided by the larger side.
    """
    work, rate = capillary_power_terms(rho, u, model, grid)
    res = work + rate
    if not relative:
        return res
    scale = max(abs(work), abs(rate))
    return 0.0 if scale == 0.0 else abs(res) / scale
