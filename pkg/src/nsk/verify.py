"""
Self-verification suite.

Each check returns a :class:`CheckResult` carrying the measured number and
the tolerance it is held to.  ``level="quick"`` uses coarse grids and short
runs; ``level="full"`` uses the resolutions of the acceptance criteria.
``capillary_sign=-1`` flips the Korteweg force in every simulation-based
check, which the dispersion and budget checks must detect.
"""

from dataclasses import dataclass
import math
import time

import numpy as np

from . import diagnostics as dg
from .constitutive import (
    Critical,
    OneD,
    PiecewiseConstant,
    PowerLaw,
    PressureLaw,
    ViscosityModel,
)
from .errors import VacuumApproached
from .korteweg import capillary_power_residual, equivalence_residual
from .scenarios import smooth_field
from .solver import _rk4, run, stable_timestep
from .spectral import Grid
from .state import FlowState, Models

__all__ = [
    "CheckResult",
    "ALPHAS",
    "check_tensor_equivalence",
    "check_operator_algebra",
    "check_pi_jgamma",
    "check_capillary_power",
    "measure_dispersion",
    "check_dispersion",
    "budget_study",
    "check_budget",
    "check_renormalized",
    "partition_constants",
    "check_partition",
    "refined_sobolev_ratio",
    "refined_sobolev_constant",
    "check_refined_sobolev",
    "verify_suite",
]

ALPHAS = (-3.0, -2.0, -1.0, 0.0, 1.0, 2.0)


@dataclass
class CheckResult:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return (f"{mark} {self.name}: measured={self.measured:.3e} "
                f"tolerance={self.tolerance:.1e} ({self.seconds:.2f} s) {self.detail}").rstrip()


def _capillarity(alpha, kappa=1.0):
    return Critical(kappa) if alpha == -2 else PowerLaw(kappa, alpha)


# ----------------------------------------------------------------------
# identity checks
# ----------------------------------------------------------------------
def check_tensor_equivalence(level="quick"):
    worst = 0.0
    cases = []
    g1 = Grid(1, 128)
    cases.append((g1, 2.0 + np.sin(g1.coordinates[0])))
    if level == "full":
        g2 = Grid(2, 128)
        x, y = g2.coordinates
        cases.append((g2, 2.0 + 0.3 * np.sin(x) * np.sin(y)))
    for grid, rho in cases:
        for a in ALPHAS:
            worst = max(worst, equivalence_residual(rho, _capillarity(a), grid))
    return CheckResult("tensor-equivalence", worst, 1e-8, worst <= 1e-8,
                       f"alpha in {list(ALPHAS)}, {len(cases)} grid(s)")


def check_operator_algebra(level="quick", seed=0):
    n = 32 if level == "quick" else 64
    grid = Grid(2, n)
    rng = np.random.default_rng(seed)
    errs = {}
    for _ in range(3):
        f = grid.random_field(rng, zero_mean=True)
        g = grid.random_field(rng, zero_mean=True)
        lam = grid.fractional_power
        for a, b in ((0.5, 0.7), (1.3, -0.4), (-0.8, 0.3)):
            lhs = lam(lam(f, b), a)
            rhs = lam(f, a + b)
            errs["composition"] = max(errs.get("composition", 0.0),
                                      np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
        rr = sum(grid.riesz(grid.riesz(f, i), i) for i in range(grid.dim))
        errs["riesz"] = max(errs.get("riesz", 0.0), np.max(np.abs(rr + f)) / np.max(np.abs(f)))
        direct = float(grid.integrate(f * f))
        errs["parseval"] = max(errs.get("parseval", 0.0),
                               abs(grid.modal_energy(f) - direct) / direct)
        scale = grid.l2_norm(f) * grid.l2_norm(g)
        for s in (0.5, 1.5, -0.7):
            gap = abs(grid.integrate(lam(f, s) * g) - grid.integrate(f * lam(g, s)))
            errs["adjoint"] = max(errs.get("adjoint", 0.0), gap / scale)
        for i in range(grid.dim):
            gap = abs(grid.integrate(grid.derivative(f, i) * g)
                      + grid.integrate(f * grid.derivative(g, i)))
            errs["adjoint"] = max(errs["adjoint"], gap / scale)
    worst = max(errs.values())
    detail = ", ".join(f"{k}={v:.1e}" for k, v in errs.items())
    return CheckResult("operator-algebra", worst, 1e-12, worst <= 1e-12, detail)


def check_pi_jgamma(samples=1000, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for gamma in (1.4, 2.0, 3.0):
        law = PressureLaw(a=1.3, gamma=gamma, rho_bar=0.8)
        s = rng.uniform(1e-3, 4.0, samples)
        lhs = (gamma - 1.0) * (law.pi(s) - law.pi(law.rho_bar))
        rhs = law.a * law.j_gamma(s)
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs)))))
    return CheckResult("pi-jgamma", worst, 1e-12, worst <= 1e-12, "gamma in [1.4, 2, 3]")


def capillary_power_models():
    return [PowerLaw(1.0, 0.0), PowerLaw(0.5, 1.0), PowerLaw(1.0, -1.0), PowerLaw(1.0, -3.0),
            Critical(1.0), PiecewiseConstant(1.5, 1.0, 0.0), OneD(1.2, 2.0, 0.5)]


def check_capillary_power(level="quick", seed=1):
    grids = [Grid(1, 256)]
    if level == "full":
        grids.append(Grid(2, 128))
    worst = 0.0
    for grid in grids:
        rng = np.random.default_rng(seed)
        for model in capillary_power_models():
            rho = 2.0 + 0.9 * smooth_field(grid, rng, 2)
            u = np.stack([0.5 * smooth_field(grid, rng, 2) for _ in range(grid.dim)])
            worst = max(worst, capillary_power_residual(rho, u, model, grid))
    return CheckResult("capillary-power", worst, 1e-8, worst <= 1e-8,
                       f"{len(capillary_power_models())} models, {len(grids)} grid(s)")


# ----------------------------------------------------------------------
# dispersion
# ----------------------------------------------------------------------
def measure_dispersion(k=1, n=256, kappa=1.0, a=1.0, gamma=2.0, rho_bar=1.0,
                       amplitude=1e-4, cfl=1.0, capillary_sign=1.0):
    """Measured and predicted frequency of a standing capillary-acoustic wave.

    Starts from ``rho = rho_bar + amplitude cos(k x)`` at rest and times the
    first zero of the mode-``k`` cosine coefficient, which sits at a quarter
    period.  Returns ``(omega_measured, omega_expected)``; the measured
    value is ``nan`` when no zero occurs within three expected periods or
    the run loses positivity first.
    """
    grid = Grid(1, n)
    x = grid.coordinates[0]
    law = PressureLaw(a, gamma, rho_bar)
    models = Models(law, ViscosityModel.constant(0.0, 0.0), PowerLaw(kappa, 0.0),
                    capillary_sign=capillary_sign)
    expected = math.sqrt(law.pressure_prime(rho_bar) * k ** 2 + rho_bar * kappa * k ** 4)
    rho = rho_bar + amplitude * np.cos(k * x)
    m = np.zeros((1, n))
    dt = stable_timestep(FlowState(rho, m), models, grid, cfl)
    w = np.zeros(2)
    basis = np.cos(k * x)
    c_prev, t = amplitude, 0.0
    t_max = 3 * 2 * math.pi / expected
    while t < t_max:
        try:
            rho, m, w = _rk4(rho, m, w, t, dt, models, grid, None)
        except VacuumApproached:
            break
        t += dt
        c = 2.0 * float(np.mean(rho * basis))
        if not math.isfinite(c):
            break
        if c <= 0.0:
            t_zero = t - dt + dt * c_prev / (c_prev - c)
            return math.pi / (2.0 * t_zero), expected
        c_prev = c
    return math.nan, expected


def check_dispersion(level="quick", capillary_sign=1.0):
    n = 64 if level == "quick" else 256
    omega, expected = measure_dispersion(1, n, capillary_sign=capillary_sign)
    err = abs(omega / expected - 1.0) if math.isfinite(omega) else math.inf
    return CheckResult("dispersion", err, 5e-3, err <= 5e-3,
                       f"n={n} omega={omega:.6f} expected={expected:.6f}")


# ----------------------------------------------------------------------
# energy budget
# ----------------------------------------------------------------------
def budget_study(n=512, t_end=1.0, amplitude=0.05, k=8, kappa=1e-4, mu=0.01,
                 output_interval=0.1, cfl=1.0, capillary_sign=1.0):
    """Budget residual at a base step and at half of it.

    Returns ``(r_base, r_half, e0)`` with ``r`` the largest ``|E + D - E0|``
    over the output times.
    """
    grid = Grid(1, n)
    x = grid.coordinates[0]
    models = Models(PressureLaw(1.0, 2.0, 1.0), ViscosityModel.constant(mu, 0.0),
                    PowerLaw(kappa, 0.0), capillary_sign=capillary_sign)
    rho = grid.dealias(1.0 + amplitude * np.sin(k * x))
    m = grid.dealias(amplitude * np.cos(k * x + 0.3))[None]
    state = FlowState(rho, m)
    dt = stable_timestep(state, models, grid, cfl)
    base = int(math.ceil(output_interval / dt))
    out = []
    for factor in (1, 2):
        res = run(state, models, grid, t_end, output_interval, substeps=base * factor)
        out.append(float(np.max(np.abs(res.series.budget_residual))))
    return out[0], out[1], res.series.energy[0]


def check_budget(level="quick", capillary_sign=1.0):
    if level == "quick":
        r1, r2, e0 = budget_study(n=128, t_end=0.5, k=4, kappa=1e-4, cfl=0.5,
                                  capillary_sign=capillary_sign)
    else:
        r1, r2, e0 = budget_study(capillary_sign=capillary_sign)
    rel = r1 / e0
    ratio = r1 / r2 if r2 > 0 else math.inf
    ok = rel <= 1e-6 and ratio >= 8.0
    return CheckResult("budget", rel, 1e-6, ok, f"halving ratio={ratio:.1f} (need >= 8)")


# ----------------------------------------------------------------------
# renormalized equation
# ----------------------------------------------------------------------
def check_renormalized(level="quick"):
    n = 64 if level == "quick" else 128
    grid = Grid(1, n)
    x = grid.coordinates[0]
    worst = 0.0
    for alpha in (0.0, 1.0, -2.0):
        cap = _capillarity(alpha, 0.05)
        models = Models(PressureLaw(1.0, 2.0, 1.0), ViscosityModel.constant(0.01, 0.0), cap)
        rho = grid.dealias(1.0 + 0.1 * np.sin(x))
        m = grid.dealias(0.1 * np.cos(x) * rho)[None]
        res = run(FlowState(rho, m), models, grid, 0.1, 0.005, keep_states=True)
        phi = dg.Bump((math.pi,), 1.5, order=8)
        worst = max(worst, float(np.max(dg.renormalized_residual(res.states, phi, cap, grid))))
    # algebraic collapse of the coefficient at alpha = 0
    rho = np.linspace(0.1, 5.0, 200)
    cap = PowerLaw(0.7, 0.0)
    collapse = float(np.max(np.abs(cap.renormalization_coefficient(rho) - cap.B_raw(rho))))
    ok = worst <= 1e-6 and collapse <= 1e-13
    return CheckResult("renormalized", worst, 1e-6, ok, f"alpha=0 collapse gap={collapse:.1e}")


# ----------------------------------------------------------------------
# partition of unity
# ----------------------------------------------------------------------
# bounds on lambda |grad phi_k| and lambda^2 |Hess phi_k| valid for every lambda
PARTITION_C1 = 8.0
PARTITION_C2 = 80.0


def partition_constants(grid, lam):
    family = dg.partition_of_unity(grid, lam)
    total = sum(p.value(grid) for p in family)
    c1 = max(float(np.max(np.abs(p.gradient(grid)))) for p in family) * lam
    c2 = max(float(np.max(np.abs(p.hessian(grid)))) for p in family) * lam ** 2
    return float(np.max(np.abs(total - 1.0))), c1, c2


def check_partition(level="quick"):
    grid = Grid(2, 64 if level == "quick" else 128)
    sums, c1s, c2s = [], [], []
    for lam in (0.5, 0.25, 0.125):
        s, c1, c2 = partition_constants(grid, lam)
        sums.append(s)
        c1s.append(c1)
        c2s.append(c2)
    ok = max(sums) <= 1e-12 and max(c1s) <= PARTITION_C1 and max(c2s) <= PARTITION_C2
    detail = (f"lambda*|grad|={['%.2f' % c for c in c1s]} "
              f"lambda^2*|hess|={['%.2f' % c for c in c2s]}")
    return CheckResult("partition", max(sums), 1e-12, ok, detail)


# ----------------------------------------------------------------------
# refined Sobolev inequality
# ----------------------------------------------------------------------
def refined_sobolev_ratio(grid, f, p, q, alpha):
    """``||f||_p / (||f||_{B^-alpha_inf,inf}^(1-theta) ||f||_{B^beta_q,q}^theta)``.

    ``theta = q/p`` and ``beta = alpha (p/q - 1)``.  The inequality holds
    with constant ``C`` iff this ratio never exceeds ``C``.
    """
    if not 1 <= q < p < math.inf or alpha <= 0:
        raise ValueError("need 1 <= q < p < inf and alpha > 0")
    theta = q / p
    beta = alpha * (p / q - 1.0)
    low = grid.besov_norm(f, -alpha, math.inf, math.inf)
    high = grid.besov_norm(f, beta, q, q)
    return grid.lp_norm(f, p) / (low ** (1.0 - theta) * high ** theta)


def refined_sobolev_constant(grid, p=4.0, q=2.0, alpha=1.0, count=100, seed=0):
    """Largest ratio over ``count`` random fields band-limited to ``|k_i| <= n/4``."""
    rng = np.random.default_rng(seed)
    ratios = [refined_sobolev_ratio(grid, grid.random_field(rng, grid.n // 4), p, q, alpha)
              for _ in range(count)]
    return float(max(ratios))


REFINED_CASES = ((4.0, 2.0, 1.0), (3.0, 1.0, 0.5), (6.0, 2.0, 0.5))


def check_refined_sobolev(level="quick"):
    """Spread of the empirical constant across three resolutions, per (p, q, alpha)."""
    sizes = {1: (64, 128, 256), 2: (32, 64, 128) if level == "full" else (16, 32, 64)}
    worst = 1.0
    parts = []
    for dim, ns in sizes.items():
        for p, q, alpha in REFINED_CASES:
            consts = [refined_sobolev_constant(Grid(dim, n), p, q, alpha) for n in ns]
            spread = max(consts) / min(consts)
            worst = max(worst, spread)
            parts.append(f"{dim}d(p={p:g},q={q:g},a={alpha:g}):C={max(consts):.3f}")
    return CheckResult("refined-sobolev", worst, 2.0, worst < 2.0, " ".join(parts))


# ----------------------------------------------------------------------
def verify_suite(level="quick", capillary_sign=1.0, echo=print):
    """Run every check; returns the list of :class:`CheckResult`."""
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    jobs = [
        lambda: check_tensor_equivalence(level),
        lambda: check_operator_algebra(level),
        check_pi_jgamma,
        lambda: check_capillary_power(level),
        lambda: check_dispersion(level, capillary_sign),
        lambda: check_budget(level, capillary_sign),
        lambda: check_renormalized(level),
        lambda: check_partition(level),
        lambda: check_refined_sobolev(level),
    ]
    results = []
    for job in jobs:
        t0 = time.perf_counter()
        res = job()
        res.seconds = time.perf_counter() - t0
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
