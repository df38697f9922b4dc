"""Flow state and the bundle of constitutive laws driving it."""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .constitutive import CapillarityModel, PressureLaw, ViscosityModel

__all__ = ["FlowState", "Models"]


@dataclass
class FlowState:
    """Conservative variables ``(rho, m = rho u)`` at time ``time``."""

    rho: np.ndarray
    momentum: np.ndarray
    time: float = 0.0

    @property
    def velocity(self):
        return self.momentum / self.rho

    def copy(self):
        return FlowState(self.rho.copy(), self.momentum.copy(), self.time)


@dataclass(frozen=True)
class Models:
    """Constitutive laws plus solver-level constants.

    ``capillary_sign`` multiplies the Korteweg force.  It is 1 for the
    physical system; flipping it is a mutation used to check that the
    verification suite notices a wrong sign.
    """

    pressure: PressureLaw
    viscosity: ViscosityModel
    capillarity: CapillarityModel
    rho_floor: Optional[float] = None
    capillary_sign: float = 1.0

    @property
    def rho_bar(self):
        return self.pressure.rho_bar

    @property
    def floor(self):
        if self.rho_floor is None:
            return 1e-6 * self.pressure.rho_bar
        return self.rho_floor

    def with_sign(self, sign):
        return replace(self, capillary_sign=float(sign))
