"""Exception types raised across the package."""


class NskError(Exception):
    """Base class for every error raised by :mod:`nsk`."""


class NegativePowerOnMean(NskError, ValueError):
    """A negative fractional power was applied to a field with nonzero mean."""


class NonZeroMean(NskError, ValueError):
    """An operator defined on zero-mean fields received a field with a mean."""


class NonPositiveDensity(NskError, ValueError):
    """A density argument was zero or negative where positivity is required."""


class ConstraintViolated(NskError, ValueError):
    """A viscosity law breaks one of its admissibility bounds.

    The offending bound is stored in ``bound``.
    """

    def __init__(self, bound, message=None):
        self.bound = bound
        super().__init__(message or f"viscosity constraint violated: {bound}")


class VacuumApproached(NskError, RuntimeError):
    """The density dropped below the configured floor during integration."""

    def __init__(self, rho_min, rho_floor, time=None):
        self.rho_min = float(rho_min)
        self.rho_floor = float(rho_floor)
        self.time = time
        where = "" if time is None else f" at t={time:.6g}"
        super().__init__(f"min rho = {rho_min:.3e} fell below floor {rho_floor:.3e}{where}")


class SRangeViolation(NskError, ValueError):
    """Sobolev gain exponent outside the admissible range for the dimension."""


class RadiusTooLarge(NskError, ValueError):
    """Partition radius not smaller than the region it should cover."""


class ParseError(NskError, ValueError):
    """Configuration file could not be parsed."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if key is not None:
            loc.append(f"key {key!r}")
        suffix = f" ({', '.join(loc)})" if loc else ""
        super().__init__(message + suffix)


class ValidationError(NskError, ValueError):
    """Configuration parsed but violates an invariant."""

    def __init__(self, invariant, message=None):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}" if message else invariant)
