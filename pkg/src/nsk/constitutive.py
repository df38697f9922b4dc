"""
Capillarity, pressure and viscosity laws.

Every capillarity law exposes ``kappa``, its derivative, and the two
antiderivatives used throughout the package,

    A'(rho) = sqrt(kappa(rho)),    B'(rho) = rho * kappa(rho),

normalised so that ``A(rho_bar) = B(rho_bar) = 0``.  With this choice the
capillary energy density is ``|grad A(rho)|^2 / 2`` and the Korteweg tensor
needs no extra constants.
"""

from dataclasses import dataclass, field
import math
from typing import Callable, Optional

import numpy as np

from .errors import ConstraintViolated, NonPositiveDensity

__all__ = [
    "CapillarityModel",
    "PowerLaw",
    "Critical",
    "PiecewiseConstant",
    "OneD",
    "smooth_step",
    "PressureLaw",
    "GrowthBounds",
    "ViscosityModel",
    "ViscosityReport",
    "viscosity_validate",
    "orlicz_psi",
    "orlicz_norm",
]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _positive(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0)):
        raise NonPositiveDensity(f"density must be positive (min {np.min(rho):.3e})")
    return rho


def _power_primitive(coef, power, rho):
    """Antiderivative of ``coef * rho**power``."""
    if power == -1:
        return coef * np.log(rho)
    return coef * rho ** (power + 1) / (power + 1)


def _gauss_integral(func, lo, hi):
    """``int_lo^hi func`` elementwise by 48-point Gauss-Legendre."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[..., None] + half[..., None] * _GL_NODES
    return half * np.sum(_GL_WEIGHTS * func(x), axis=-1)


def smooth_step(t):
    """``C^inf`` step rising from 0 at ``t <= 0`` to 1 at ``t >= 1``.

    Returns ``(S, S', S'')``.  ``S = f(t) / (f(t) + f(1-t))`` with
    ``f(s) = exp(-1/s)``; every derivative vanishes at both ends.
    """
    t = np.asarray(t, dtype=float)
    inside = (t > 0) & (t < 1)
    ti = np.where(inside, t, 0.5)
    si = 1.0 - ti
    n = np.exp(-1.0 / ti)
    m = np.exp(-1.0 / si)
    n1 = n / ti ** 2
    m1 = -m / si ** 2
    n2 = n * (1.0 / ti ** 4 - 2.0 / ti ** 3)
    m2 = m * (1.0 / si ** 4 - 2.0 / si ** 3)
    d = n + m
    d1 = n1 + m1
    d2 = n2 + m2
    s = n / d
    s1 = (n1 * d - n * d1) / d ** 2
    s2 = (n2 * d - n * d2) / d ** 2 - 2.0 * d1 * s1 / d
    s = np.where(inside, s, (t >= 1).astype(float))
    s1 = np.where(inside, s1, 0.0)
    s2 = np.where(inside, s2, 0.0)
    return s, s1, s2


class CapillarityModel:
    """Base class for density-dependent capillarity ``kappa(rho)``.

    Subclasses implement ``_kappa``, ``_kappa_prime`` and the raw
    antiderivatives ``A_raw``, ``B_raw`` (any additive constant).
    """

    def kappa(self, rho):
        return self._kappa(_positive(rho))

    def kappa_prime(self, rho):
        return self._kappa_prime(_positive(rho))

    def A_prime(self, rho):
        return np.sqrt(self.kappa(rho))

    def B_prime(self, rho):
        rho = _positive(rho)
        return rho * self._kappa(rho)

    def A(self, rho, rho_bar=1.0):
        rho = _positive(rho)
        return self.A_raw(rho) - self.A_raw(_positive(rho_bar))

    def B(self, rho, rho_bar=1.0):
        rho = _positive(rho)
        return self.B_raw(rho) - self.B_raw(_positive(rho_bar))

    def renormalization_coefficient(self, rho):
        """``rho B'(rho) - B(rho)`` with the raw antiderivative."""
        rho = _positive(rho)
        return rho * self._kappa(rho) * rho - self.B_raw(rho)


@dataclass(frozen=True)
class PowerLaw(CapillarityModel):
    """``kappa(rho) = kappa * rho**alpha`` with ``alpha != -2``."""

    kappa_coef: float
    alpha: float

    def __post_init__(self):
        if not self.kappa_coef > 0:
            raise ValueError("kappa must be positive")
        if self.alpha == -2:
            raise ValueError("alpha = -2 is the Critical model")

    def _kappa(self, rho):
        return self.kappa_coef * rho ** self.alpha

    def _kappa_prime(self, rho):
        return self.kappa_coef * self.alpha * rho ** (self.alpha - 1)

    def A_raw(self, rho):
        return _power_primitive(math.sqrt(self.kappa_coef), 0.5 * self.alpha, rho)

    def B_raw(self, rho):
        return _power_primitive(self.kappa_coef, self.alpha + 1, rho)

    def paper_constants(self):
        """``(A1, A2, B)`` multiplying ``Delta rho^(2+alpha)`` and friends."""
        k, a = self.kappa_coef, self.alpha
        return k / (2 + a), 2 * k * (a + 1) / (a + 2) ** 2, 4 * k / (a + 2) ** 2


@dataclass(frozen=True)
class Critical(CapillarityModel):
    """``kappa(rho) = kappa / rho**2``; here ``A`` and ``B`` are logarithms."""

    kappa_coef: float
    alpha = -2.0

    def __post_init__(self):
        if not self.kappa_coef > 0:
            raise ValueError("kappa must be positive")

    def _kappa(self, rho):
        return self.kappa_coef / rho ** 2

    def _kappa_prime(self, rho):
        return -2.0 * self.kappa_coef / rho ** 3

    def A_raw(self, rho):
        return math.sqrt(self.kappa_coef) * np.log(rho)

    def B_raw(self, rho):
        return self.kappa_coef * np.log(rho)


@dataclass(frozen=True)
class PiecewiseConstant(CapillarityModel):
    """Capillarity approximating a constant away from vacuum.

    ``kappa = rho**-(2+eps)`` below ``rho_threshold``, ``kappa`` above twice
    the threshold.  In between the two branches are mixed by
    :func:`smooth_step`, so ``kappa`` is ``C^inf`` and, being a convex
    combination of positive functions, positive for every ``eps``.
    """

    rho_threshold: float
    kappa_coef: float
    epsilon: float = 0.0

    def __post_init__(self):
        if not self.rho_threshold > 0:
            raise ValueError("rho_threshold must be positive")
        if not self.kappa_coef > 0:
            raise ValueError("kappa must be positive")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be >= 0")

    # low branch exponent
    @property
    def _p(self):
        return -(2.0 + self.epsilon)

    def _blend(self, rho):
        """Smooth step ``S`` on the bridge and its derivative in ``rho``."""
        a = self.rho_threshold
        t = np.clip((rho - a) / a, 0.0, 1.0)
        s, ds, _ = smooth_step(t)
        return s, ds / a

    def _bridge(self, rho):
        s, _ = self._blend(rho)
        return (1.0 - s) * rho ** self._p + s * self.kappa_coef

    def _bridge_prime(self, rho):
        s, ds = self._blend(rho)
        low = rho ** self._p
        return (1.0 - s) * self._p * rho ** (self._p - 1) + ds * (self.kappa_coef - low)

    def _select(self, rho, low, mid, high):
        a = self.rho_threshold
        rho = np.asarray(rho, dtype=float)
        out = np.empty_like(rho)
        lo = rho < a
        hi = rho > 2 * a
        md = ~(lo | hi)
        out[lo] = low(rho[lo])
        out[md] = mid(rho[md])
        out[hi] = high(rho[hi])
        return out if out.ndim else float(out)

    def _kappa(self, rho):
        k = self.kappa_coef
        return self._select(rho, lambda r: r ** self._p, self._bridge,
                            lambda r: np.full_like(r, k))

    def _kappa_prime(self, rho):
        return self._select(rho, lambda r: self._p * r ** (self._p - 1),
                            self._bridge_prime, np.zeros_like)

    def _primitive(self, rho, low_prim, bridge_density, high_prim):
        """Continuous antiderivative; ``high_prim`` vanishes at ``2 a``."""
        a = self.rho_threshold
        start = low_prim(np.asarray(a))
        bridge_total = _gauss_integral(bridge_density, a, 2 * a)
        return self._select(
            rho,
            low_prim,
            lambda r: start + _gauss_integral(bridge_density, np.full_like(r, a), r),
            lambda r: start + bridge_total + high_prim(r),
        )

    def A_raw(self, rho):
        sk = math.sqrt(self.kappa_coef)
        a2 = 2 * self.rho_threshold
        return self._primitive(
            rho,
            lambda r: _power_primitive(1.0, 0.5 * self._p, r),
            lambda r: np.sqrt(self._bridge(r)),
            lambda r: sk * (r - a2),
        )

    def B_raw(self, rho):
        k = self.kappa_coef
        a2 = 2 * self.rho_threshold
        return self._primitive(
            rho,
            lambda r: _power_primitive(1.0, self._p + 1, r),
            lambda r: r * self._bridge(r),
            lambda r: 0.5 * k * (r * r - a2 * a2),
        )


@dataclass(frozen=True)
class OneD(PiecewiseConstant):
    """Piecewise capillarity of the one-dimensional large-data regime.

    Same law as :class:`PiecewiseConstant`; the boundary convention at the
    thresholds is irrelevant because ``kappa`` is continuous there.
    """


# ----------------------------------------------------------------------
# pressure
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class PressureLaw:
    """Isothermal gamma law ``P = a rho**gamma`` around a reference ``rho_bar``."""

    a: float = 1.0
    gamma: float = 2.0
    rho_bar: float = 1.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if not self.rho_bar > 0:
            raise ValueError("rho_bar must be positive")

    def pressure(self, rho):
        return self.a * np.asarray(rho, dtype=float) ** self.gamma

    def pressure_prime(self, rho):
        return self.a * self.gamma * np.asarray(rho, dtype=float) ** (self.gamma - 1)

    def pi(self, rho):
        """Pressure potential with ``P = s Pi'(s) - Pi(s)`` and ``Pi'(rho_bar) = 0``."""
        s = _positive(rho)
        a, g, rb = self.a, self.gamma, self.rho_bar
        return a * s ** g / (g - 1) - a * g * rb ** (g - 1) * s / (g - 1)

    def pi_prime(self, rho):
        s = _positive(rho)
        a, g, rb = self.a, self.gamma, self.rho_bar
        return a * g * (s ** (g - 1) - rb ** (g - 1)) / (g - 1)

    def pi_second(self, rho):
        s = _positive(rho)
        return self.a * self.gamma * s ** (self.gamma - 2)

    def pi_excess(self, rho):
        """``Pi(rho) - Pi(rho_bar)``, nonnegative by convexity."""
        return self.a * self.j_gamma(rho) / (self.gamma - 1)

    def j_gamma(self, rho):
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < 0):
            raise ValueError("j_gamma needs rho >= 0")
        g, rb = self.gamma, self.rho_bar
        return rho ** g + (g - 1) * rb ** g - g * rb ** (g - 1) * rho


# ----------------------------------------------------------------------
# viscosity
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class GrowthBounds:
    """Constants of the four growth bounds on ``mu`` and ``lambda``.

    ``mu > c`` on ``[0, s0]``, ``mu <= c1 s**m`` beyond ``s0``;
    ``lambda > c_prime`` on ``[0, s0_prime]``, ``lambda <= c2 s**m_prime``
    beyond ``s0_prime``.
    """

    c: float
    s0: float
    c1: float
    m: int
    c_prime: float
    s0_prime: float
    c2: float
    m_prime: int


@dataclass(frozen=True)
class ViscosityModel:
    mu: Callable
    lam: Callable
    name: str = "custom"
    bounds: Optional[GrowthBounds] = None
    params: dict = field(default_factory=dict)

    @classmethod
    def constant(cls, mu=0.0, lam=0.0):
        mu, lam = float(mu), float(lam)
        return cls(
            mu=lambda rho: np.full(np.shape(rho), mu),
            lam=lambda rho: np.full(np.shape(rho), lam),
            name="constant",
            params={"mu": mu, "lambda": lam},
        )

    @classmethod
    def linear(cls, c=1.0, s0=1.0):
        """Degenerate ``mu = c rho``, ``lambda = 0``, checked against ``mu > c`` near vacuum."""
        c = float(c)
        return cls(
            mu=lambda rho: c * np.asarray(rho, dtype=float),
            lam=lambda rho: np.zeros(np.shape(rho)),
            name="linear",
            bounds=GrowthBounds(c=c, s0=s0, c1=c, m=1, c_prime=-math.inf,
                                s0_prime=s0, c2=1.0, m_prime=0),
            params={"c": c, "s0": s0},
        )

    @classmethod
    def power(cls, mu0, mu_exp, lam0=0.0, lam_exp=0.0):
        """``mu = mu0 rho**mu_exp``, ``lambda = lam0 rho**lam_exp``."""
        mu0, mu_exp, lam0, lam_exp = map(float, (mu0, mu_exp, lam0, lam_exp))
        return cls(
            mu=lambda rho: mu0 * np.asarray(rho, dtype=float) ** mu_exp,
            lam=lambda rho: lam0 * np.asarray(rho, dtype=float) ** lam_exp,
            name="power",
            params={"mu0": mu0, "mu_exp": mu_exp, "lambda0": lam0, "lambda_exp": lam_exp},
        )

    @property
    def inviscid(self):
        return self.name == "constant" and self.params["mu"] == 0 and self.params["lambda"] == 0

    def __call__(self, rho):
        return self.mu(rho), self.lam(rho)


@dataclass
class ViscosityReport:
    valid: bool
    failures: list
    min_mu: float
    min_bulk: float


def viscosity_validate(model, rho_range=(1e-3, 10.0), dim=2, samples=400, strict=True):
    """Sample the viscosity admissibility conditions on ``rho_range``.

    Checks ``mu > 0`` and ``2 mu + dim lambda >= 0`` everywhere, plus the
    four growth bounds when the model carries :class:`GrowthBounds`.

    Raises
    ------
    ConstraintViolated
        On the first failing bound when ``strict`` is true.
    """
    lo, hi = rho_range
    rho = np.geomspace(lo, hi, samples)
    mu, lam = model(rho)
    bulk = 2 * mu + dim * lam
    failures = []
    if np.any(mu <= 0):
        failures.append("mu_positive")
    if np.any(bulk < 0):
        failures.append("two_mu_plus_n_lambda_nonnegative")
    b = model.bounds
    if b is not None:
        near = rho <= b.s0
        if np.any(mu[near] <= b.c):
            failures.append("mu_lower_bound_near_vacuum")
        far = rho >= b.s0
        if np.any(mu[far] > b.c1 * rho[far] ** b.m):
            failures.append("mu_growth_bound")
        near = rho <= b.s0_prime
        if np.any(lam[near] <= b.c_prime):
            failures.append("lambda_lower_bound_near_vacuum")
        far = rho >= b.s0_prime
        if np.any(lam[far] > b.c2 * rho[far] ** b.m_prime):
            failures.append("lambda_growth_bound")
    report = ViscosityReport(not failures, failures, float(mu.min()), float(bulk.min()))
    if strict and failures:
        raise ConstraintViolated(failures[0])
    return report


# ----------------------------------------------------------------------
# Orlicz norm
# ----------------------------------------------------------------------
def orlicz_psi(x, p, q, delta=1.0):
    """Young function equal to ``x**p`` up to ``delta`` and ``delta**(p-q) x**q`` after."""
    x = np.abs(np.asarray(x, dtype=float))
    return np.where(x <= delta, x ** p, delta ** (p - q) * x ** q)


def orlicz_norm(f, grid, p, q, delta=1.0, rtol=1e-10):
    """Luxemburg norm ``inf{t > 0 : int Psi(|f|/t) <= 1}`` by bisection."""
    if p < 1 or q < 1 or not delta > 0:
        raise ValueError("orlicz_norm needs p, q >= 1 and delta > 0")
    f = np.abs(np.asarray(f, dtype=float))
    if not np.any(f):
        return 0.0

    def modular(t):
        return float(grid.integrate(orlicz_psi(f / t, p, q, delta)))

    hi = float(f.max())
    while modular(hi) > 1:
        hi *= 2.0
    lo = hi
    while modular(lo) <= 1:
        lo *= 0.5
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if modular(mid) > 1:
            lo = mid
        else:
            hi = mid
    return hi
