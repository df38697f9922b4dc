"""Pseudospectral simulation and verification toolkit for the isothermal
compressible Navier-Stokes-Korteweg system on periodic domains."""

from .constitutive import (
    Critical,
    OneD,
    PiecewiseConstant,
    PowerLaw,
    PressureLaw,
    ViscosityModel,
    orlicz_norm,
    viscosity_validate,
)
from .config import SimulationConfig, load_config, parse_config
from .errors import (
    ConstraintViolated,
    NegativePowerOnMean,
    NonPositiveDensity,
    NonZeroMean,
    NskError,
    ParseError,
    RadiusTooLarge,
    SRangeViolation,
    VacuumApproached,
    ValidationError,
)
from .korteweg import divK_primitive, equivalence_residual, korteweg, tensor_ab
from .solver import advance, compute_rhs, run, stable_timestep
from .spectral import Grid
from .state import FlowState, Models

__version__ = "0.1.0"
