"""
Manufactured solution for order-of-accuracy studies (1D).

The exact fields are

    rho* = 2 + eps sin x cos t,     u* = eps sin x sin t,

and the forcing is the residual of the PDE applied to them, written in
closed form with the chain rule.  In 1D the capillary force reduces to

    d_x K = rho kappa rho_xxx + 2 rho kappa' rho_x rho_xx + rho kappa'' rho_x^3 / 2.
"""

import numpy as np

from .constitutive import Critical, PowerLaw
from .state import FlowState

__all__ = ["ManufacturedSolution"]


def _kappa_derivatives(model, rho):
    if isinstance(model, PowerLaw):
        k, a = model.kappa_coef, model.alpha
        return k * rho ** a, k * a * rho ** (a - 1), k * a * (a - 1) * rho ** (a - 2)
    if isinstance(model, Critical):
        k = model.kappa_coef
        return k / rho ** 2, -2 * k / rho ** 3, 6 * k / rho ** 4
    raise TypeError("manufactured forcing supports PowerLaw and Critical models")


class ManufacturedSolution:
    """Exact fields and forcing for a 1D run with constant viscosity."""

    def __init__(self, grid, models, eps=0.1):
        if grid.dim != 1:
            raise ValueError("the manufactured solution is one-dimensional")
        if models.viscosity.name != "constant":
            raise ValueError("the manufactured solution needs constant viscosity")
        self.grid = grid
        self.models = models
        self.eps = eps
        self.x = grid.coordinates[0]

    def fields(self, t):
        """``rho``, ``u`` and their derivatives at time ``t``."""
        e, x = self.eps, self.x
        s, c = np.sin(x), np.cos(x)
        st, ct = np.sin(t), np.cos(t)
        return {
            "rho": 2.0 + e * s * ct,
            "rho_t": -e * s * st,
            "rho_x": e * c * ct,
            "rho_xx": -e * s * ct,
            "rho_xxx": -e * c * ct,
            "u": e * s * st,
            "u_t": e * s * ct,
            "u_x": e * c * st,
            "u_xx": -e * s * st,
        }

    def exact(self, t):
        f = self.fields(t)
        return FlowState(f["rho"], (f["rho"] * f["u"])[None], float(t))

    def forcing(self, t):
        """``(f_rho, f_m)`` such that the exact fields solve the forced system."""
        f = self.fields(t)
        rho, u = f["rho"], f["u"]
        rx, rxx, rxxx = f["rho_x"], f["rho_xx"], f["rho_xxx"]
        law = self.models.pressure
        par = self.models.viscosity.params
        nu = 2.0 * par["mu"] + par["lambda"]
        kap, kp, kpp = _kappa_derivatives(self.models.capillarity, rho)
        f_rho = f["rho_t"] + rx * u + rho * f["u_x"]
        m_t = f["rho_t"] * u + rho * f["u_t"]
        convection = rx * u * u + 2.0 * rho * u * f["u_x"]
        pressure = law.a * law.gamma * rho ** (law.gamma - 1.0) * rx
        capillary = rho * kap * rxxx + 2.0 * rho * kp * rx * rxx + 0.5 * rho * kpp * rx ** 3
        sign = self.models.capillary_sign
        f_m = m_t + convection + pressure - nu * f["u_xx"] - sign * capillary
        return f_rho, f_m[None]

    def time_derivative(self, t):
        """Exact ``(d rho/dt, d m/dt)``."""
        f = self.fields(t)
        return f["rho_t"], (f["rho_t"] * f["u"] + f["rho"] * f["u_t"])[None]
