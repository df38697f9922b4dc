"""
Energies, budgets and the functionals monitored along a trajectory.

Time integrals use the trapezoidal rule over the recorded output times.
Functions that need the full trajectory take ``states``, a list of
:class:`~nsk.state.FlowState` as kept by ``solver.run(keep_states=True)``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .constitutive import Critical, _positive, orlicz_norm, smooth_step
from .errors import RadiusTooLarge, SRangeViolation

__all__ = [
    "DiagnosticsSeries",
    "record",
    "total_energy",
    "gamma_energy",
    "cap_energy",
    "viscous_terms",
    "dissipation_densities",
    "energy_budget",
    "Bump",
    "PartitionElement",
    "partition_of_unity",
    "localized_energy",
    "localized_flux_terms",
    "localized_budget",
    "gain_norm",
    "integrability_gain",
    "concentration_scan",
    "renormalized_residual",
    "weak_form_residual",
    "large_kappa_check",
    "orlicz_energy_check",
    "trapezoid",
]


def trapezoid(values, times):
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if len(times) < 2:
        return 0.0
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(times)))


def _cumtrapz(values, times):
    values = np.asarray(values, dtype=float)
    steps = 0.5 * (values[1:] + values[:-1]) * np.diff(times)
    return np.concatenate([[0.0], np.cumsum(steps)])


# ----------------------------------------------------------------------
# global energies
# ----------------------------------------------------------------------
def _kinetic_density(state):
    m = state.momentum
    return 0.5 * np.sum(m * m, axis=0) / state.rho


def _capillary_density(state, models, grid):
    g = grid.gradient(state.rho)
    return 0.5 * models.capillarity.kappa(state.rho) * np.sum(g * g, axis=0)


def total_energy(state, models, grid):
    """``int rho|u|^2/2 + Pi(rho) - Pi(rho_bar) + kappa(rho)|grad rho|^2/2``."""
    law = models.pressure
    pot = law.pi(state.rho) - law.pi(law.rho_bar)
    dens = _kinetic_density(state) + pot + _capillary_density(state, models, grid)
    return float(grid.integrate(dens))


def gamma_energy(state, models, grid):
    """Energy with the potential written as ``a j_gamma / (gamma - 1)``."""
    law = models.pressure
    pot = law.a * law.j_gamma(state.rho) / (law.gamma - 1.0)
    dens = _kinetic_density(state) + pot + _capillary_density(state, models, grid)
    return float(grid.integrate(dens))


def cap_energy(state, models, grid):
    """``||grad A(rho)||^2 / 2``."""
    gA = grid.gradient(models.capillarity.A(state.rho, models.rho_bar))
    return 0.5 * float(grid.integrate(np.sum(gA * gA, axis=0)))


def viscous_terms(grid, u, mu, lam):
    """Viscous stress and the two dissipation densities."""
    d = grid.dim
    grad_u = np.stack([grid.gradient(u[i]) for i in range(d)])  # [i, j] = d_j u_i
    div_u = sum(grad_u[i, i] for i in range(d))
    strain = 0.5 * (grad_u + np.swapaxes(grad_u, 0, 1))
    stress = 2.0 * mu * strain
    for i in range(d):
        stress[i, i] += lam * div_u
    strain2 = np.sum(strain * strain, axis=(0, 1))
    diss_a29 = 2.0 * mu * strain2 + lam * div_u ** 2
    diss_ineq1 = mu * strain2 + (mu + lam) * div_u ** 2
    return stress, diss_a29, diss_ineq1


def dissipation_densities(state, models, grid):
    """``(2 mu|D|^2 + lam (div u)^2, mu|D|^2 + (mu + lam)(div u)^2)``."""
    mu, lam = models.viscosity(state.rho)
    _, da, di = viscous_terms(grid, state.velocity, mu, lam)
    return da, di


# ----------------------------------------------------------------------
# series
# ----------------------------------------------------------------------
@dataclass
class DiagnosticsSeries:
    """Scalar diagnostics sampled at the output times of a run."""

    dim: int
    times: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    momentum: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    energy_gamma: list = field(default_factory=list)
    diss_a29: list = field(default_factory=list)
    diss_ineq1: list = field(default_factory=list)
    budget_residual: list = field(default_factory=list)
    rho_min: list = field(default_factory=list)
    rho_max: list = field(default_factory=list)
    cap_energy: list = field(default_factory=list)
    concentration_max: list = field(default_factory=list)

    @property
    def columns(self):
        mom = ["mom_x", "mom_y"][: self.dim]
        return (["t", "mass"] + mom + ["E", "E_gamma", "diss_cum_a29", "diss_cum_ineq1",
                "budget_residual", "rho_min", "rho_max", "cap_energy",
                "concentration_max"])

    def rows(self):
        for k in range(len(self.times)):
            yield ([self.times[k], self.mass[k]] + list(self.momentum[k])
                   + [self.energy[k], self.energy_gamma[k], self.diss_a29[k],
                      self.diss_ineq1[k], self.budget_residual[k], self.rho_min[k],
                      self.rho_max[k], self.cap_energy[k], self.concentration_max[k]])

    def __len__(self):
        return len(self.times)


def record(series, state, dissipated, models, grid, ball_radius=None):
    """Append one row; ``dissipated`` holds the two running dissipation totals."""
    if ball_radius is None:
        ball_radius = grid.length / 8.0
    e = total_energy(state, models, grid)
    series.times.append(float(state.time))
    series.mass.append(float(grid.integrate(state.rho)))
    series.momentum.append([float(v) for v in grid.integrate(state.momentum)])
    series.energy.append(e)
    series.energy_gamma.append(gamma_energy(state, models, grid))
    series.diss_a29.append(float(dissipated[0]))
    series.diss_ineq1.append(float(dissipated[1]))
    e0 = series.energy[0]
    series.budget_residual.append(e + float(dissipated[0]) - e0)
    series.rho_min.append(float(np.min(state.rho)))
    series.rho_max.append(float(np.max(state.rho)))
    series.cap_energy.append(cap_energy(state, models, grid))
    series.concentration_max.append(
        concentration_scan(state.rho, ball_radius, models.capillarity, grid,
                           models.rho_bar)[0])


def energy_budget(series):
    """``E(t) + int_0^t D - E(0)`` using the ``2 mu |D|^2 + lam (div u)^2`` convention."""
    e = np.asarray(series.energy)
    return e + np.asarray(series.diss_a29) - e[0]


# ----------------------------------------------------------------------
# test functions
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Bump:
    """Polynomial bump ``(1 - |x - c|^2 / R^2)^order`` on the torus.

    ``order`` sets the smoothness: the bump is ``C^(order-1)``.
    """

    center: tuple
    radius: float
    order: int = 6

    def _parts(self, grid):
        if not 0 < self.radius < grid.length / 2:
            raise ValueError("bump radius must lie in (0, length/2)")
        if self.order < 4:
            raise ValueError("bump order must be at least 4")
        y = grid.displacement(self.center)
        q = 1.0 - np.sum(y * y, axis=0) / self.radius ** 2
        return y, np.clip(q, 0.0, None)

    def value(self, grid):
        _, q = self._parts(grid)
        return q ** self.order

    def gradient(self, grid):
        y, q = self._parts(grid)
        k, r2 = self.order, self.radius ** 2
        return -2.0 * k / r2 * q ** (k - 1) * y

    def hessian(self, grid):
        y, q = self._parts(grid)
        k, r2 = self.order, self.radius ** 2
        d = grid.dim
        out = np.empty((d, d) + grid.shape)
        for i in range(d):
            for j in range(d):
                out[i, j] = 4.0 * k * (k - 1) / r2 ** 2 * q ** (k - 2) * y[i] * y[j]
                if i == j:
                    out[i, j] -= 2.0 * k / r2 * q ** (k - 1)
        return out

    def grad_laplacian(self, grid):
        """``grad(Lap phi)``, needed when every derivative sits on the test."""
        y, q = self._parts(grid)
        k, r2, d = self.order, self.radius ** 2, grid.dim
        y2 = np.sum(y * y, axis=0)
        lap_q = -2.0 * (k - 1) / r2 * (d * q ** (k - 2)
                                       - 2.0 * (k - 2) * y2 * q ** (k - 3) / r2)
        inner = lap_q - 4.0 * (k - 1) / r2 * q ** (k - 2)
        return -2.0 * k / r2 * inner * y


@dataclass(frozen=True)
class PartitionElement:
    """Tensor product of smooth hat functions, one per axis.

    Along each axis the profile is ``S(1 + t)`` for ``t <= 0`` and
    ``S(1 - t)`` for ``t >= 0`` with ``t = (x - x_k)/h`` and ``S`` from
    :func:`~nsk.constitutive.smooth_step`, so neighbouring elements spaced
    by ``h`` sum to one.
    """

    center: tuple
    half_width: float

    def _axis(self, grid, axis):
        """1D profile and its two derivatives, shaped to broadcast on the grid."""
        n, length = grid.n, grid.length
        x = np.arange(n) * (length / n)
        y = (x - self.center[axis] + 0.5 * length) % length - 0.5 * length
        t = y / self.half_width
        s, s1, s2 = smooth_step(1.0 - np.abs(t))
        shape = [1] * grid.dim
        shape[axis] = n
        h = self.half_width
        return (s.reshape(shape), (-np.sign(t) * s1 / h).reshape(shape),
                (s2 / h ** 2).reshape(shape))

    def _factors(self, grid):
        return [self._axis(grid, a) for a in range(grid.dim)]

    def value(self, grid):
        out = np.ones(grid.shape)
        for f in self._factors(grid):
            out = out * f[0]
        return out

    def gradient(self, grid):
        fac = self._factors(grid)
        d = grid.dim
        out = []
        for i in range(d):
            term = np.ones(grid.shape)
            for a in range(d):
                term = term * (fac[a][1] if a == i else fac[a][0])
            out.append(term)
        return np.stack(out)

    def hessian(self, grid):
        fac = self._factors(grid)
        d = grid.dim
        out = np.empty((d, d) + grid.shape)
        for i in range(d):
            for j in range(d):
                term = np.ones(grid.shape)
                for a in range(d):
                    order = (a == i) + (a == j)
                    term = term * fac[a][order]
                out[i, j] = term
        return out


def partition_of_unity(grid, lambda_radius):
    """Smooth partition of the torus with ``supp phi_k`` inside ``B(x_k, lambda)``.

    Raises
    ------
    RadiusTooLarge
        If ``lambda_radius`` is not smaller than the period.
    """
    if not 0 < lambda_radius < grid.length:
        raise RadiusTooLarge(f"radius {lambda_radius} must lie in (0, {grid.length})")
    target = lambda_radius / math.sqrt(grid.dim)
    per_axis = int(math.ceil(grid.length / target))
    h = grid.length / per_axis
    ticks = [k * h for k in range(per_axis)]
    centers = np.stack(np.meshgrid(*[ticks] * grid.dim, indexing="ij"), axis=-1)
    return [PartitionElement(tuple(float(v) for v in c), h)
            for c in centers.reshape(-1, grid.dim)]


def _psi_parts(psi, grid):
    """Values, gradient and Hessian of a test function; ``None`` means 1."""
    if psi is None:
        zero = np.zeros((grid.dim,) + grid.shape)
        return np.ones(grid.shape), zero, np.zeros((grid.dim,) + zero.shape)
    return psi.value(grid), psi.gradient(grid), psi.hessian(grid)


# ----------------------------------------------------------------------
# localized energy
# ----------------------------------------------------------------------
def localized_energy(state, psi, models, grid):
    """``int psi (rho|u|^2 + |grad A|^2 + 2 Pi(rho) - 2 Pi(rho_bar)) / 2``."""
    val = np.ones(grid.shape) if psi is None else psi.value(grid)
    law = models.pressure
    gA = grid.gradient(models.capillarity.A(state.rho, models.rho_bar))
    dens = (_kinetic_density(state) + 0.5 * np.sum(gA * gA, axis=0)
            + law.pi(state.rho) - law.pi(law.rho_bar))
    return float(grid.integrate(val * dens))


def localized_flux_terms(state, psi, models, grid):
    """Rate of change of the localized energy split into named terms.

    Returns a dict of spatial integrals whose sum equals
    ``d/dt localized_energy + int psi * dissipation`` along smooth flows.
    The four capillary terms involve ``grad psi`` and ``Hess psi`` only.
    """
    val, gpsi, hpsi = _psi_parts(psi, grid)
    rho, u = state.rho, state.velocity
    law, cap = models.pressure, models.capillarity
    d = grid.dim
    kap = cap.kappa(rho)
    grho = grid.gradient(rho)
    grho2 = np.sum(grho * grho, axis=0)
    u_dot_gpsi = np.sum(u * gpsi, axis=0)
    mu, lam = models.viscosity(rho)
    stress, _, _ = viscous_terms(grid, u, mu, lam)
    grad_u = np.stack([grid.gradient(u[i]) for i in range(d)])
    div_rho_u = grid.divergence(rho * u)
    terms = {
        "kinetic": 0.5 * rho * np.sum(u * u, axis=0) * u_dot_gpsi,
        "pressure": (law.pi(rho) + law.pressure(rho)) * u_dot_gpsi,
        "viscous": -np.einsum("ij...,i...,j...->...", stress, u, gpsi),
        "cap_mass": kap * np.sum(grho * gpsi, axis=0) * div_rho_u,
        "cap_gradient": (kap + 0.5 * rho * cap.kappa_prime(rho)) * grho2 * u_dot_gpsi,
        "cap_strain": rho * kap * np.einsum("j...,ij...,i...->...", grho, grad_u, gpsi),
        "cap_hessian": rho * kap * np.einsum("j...,i...,ij...->...", grho, u, hpsi),
    }
    return {k: float(grid.integrate(v)) for k, v in terms.items()}


def localized_budget(states, psi, models, grid):
    """Residual of the localized energy balance along a stored trajectory.

    Returns ``(residual, parts)`` where ``residual[k]`` is
    ``A(t_k) + int_0^t_k int psi D - A(0) - int_0^t_k sum(flux terms)``
    and ``parts`` holds the per-time values of every term.
    """
    times = np.array([s.time for s in states])
    energy = np.array([localized_energy(s, psi, models, grid) for s in states])
    val = np.ones(grid.shape) if psi is None else psi.value(grid)
    diss = []
    fluxes = []
    for s in states:
        if models.viscosity.inviscid:
            diss.append(0.0)
        else:
            da, _ = dissipation_densities(s, models, grid)
            diss.append(float(grid.integrate(val * da)))
        fluxes.append(localized_flux_terms(s, psi, models, grid))
    names = list(fluxes[0])
    flux_total = np.array([sum(f.values()) for f in fluxes])
    residual = (energy + _cumtrapz(diss, times) - energy[0]
                - _cumtrapz(flux_total, times))
    parts = {"energy": energy, "dissipation": np.array(diss)}
    for name in names:
        parts[name] = np.array([f[name] for f in fluxes])
    return residual, parts


# ----------------------------------------------------------------------
# gain of derivative and integrability
# ----------------------------------------------------------------------
def _check_s(s, dim):
    upper = 2.0 if dim == 2 else 0.5
    if not 0 <= s < upper:
        raise SRangeViolation(f"s must lie in [0, {upper}) in dimension {dim}, got {s}")


def gain_norm(states, phi, s, model, grid, rho_bar=1.0):
    """``(int_0^T ||phi B(rho)||^2_{H^(1+s/2)} dt)^(1/2)``, inhomogeneous norm."""
    _check_s(s, grid.dim)
    val = np.ones(grid.shape) if phi is None else phi.value(grid)
    times = [st.time for st in states]
    sq = [float(grid.sobolev_norm(val * model.B(st.rho, rho_bar), 1.0 + 0.5 * s,
                                  homogeneous=False)) ** 2 for st in states]
    if len(states) == 1:
        return math.sqrt(sq[0])
    return math.sqrt(trapezoid(sq, times))


def integrability_gain(states, phi, alpha_gain, models, grid):
    """Space-time integrals ``int int (phi rho)^(gamma+alpha)`` and
    ``int int phi rho^(alpha-2) |grad rho|^2`` for the critical model.
    """
    if not isinstance(models.capillarity, Critical):
        raise TypeError("integrability_gain is defined for the Critical model")
    if not alpha_gain > 0:
        raise ValueError("alpha_gain must be positive")
    val = np.ones(grid.shape) if phi is None else phi.value(grid)
    g = models.pressure.gamma
    times = [st.time for st in states]
    powers, grads = [], []
    for st in states:
        rho = _positive(st.rho)
        gr = grid.gradient(rho)
        powers.append(float(grid.integrate((val * rho) ** (g + alpha_gain))))
        grads.append(float(grid.integrate(val * rho ** (alpha_gain - 2.0)
                                          * np.sum(gr * gr, axis=0))))
    return trapezoid(powers, times), trapezoid(grads, times)


# ----------------------------------------------------------------------
# concentration
# ----------------------------------------------------------------------
def concentration_scan(rho, r, model, grid, rho_bar=1.0):
    """Largest ``||1_{B(x, r)} grad A(rho)||_{L2}`` over grid centres ``x``.

    Returns ``(value, center)``.  The sharp ball indicator is convolved
    with ``|grad A|^2`` by FFT, which covers every centre at once.
    """
    if not r > 0:
        raise ValueError("ball radius must be positive")
    gA = grid.gradient(model.A(rho, rho_bar))
    dens = np.sum(gA * gA, axis=0)
    origin = grid.displacement((0.0,) * grid.dim)
    ball = (np.sum(origin * origin, axis=0) < r * r).astype(float)
    conv = grid.ifft(grid.fft(dens) * np.conj(grid.fft(ball))) * grid.cell_volume
    conv = np.maximum(conv, 0.0)
    idx = np.unravel_index(int(np.argmax(conv)), conv.shape)
    center = tuple(float(grid.coordinates[a][idx]) for a in range(grid.dim))
    return float(np.sqrt(conv[idx])), center


# ----------------------------------------------------------------------
# renormalized equation
# ----------------------------------------------------------------------
def renormalized_residual(states, phi, model, grid):
    """Relative residual of the renormalized equation for ``B(rho)``.

    Checks ``d_t(phi B) + div(phi B u) + phi (rho B' - B) div u = B u . grad phi``
    at interior output times, with ``d_t`` from a five-point centred
    difference over equally spaced outputs.
    """
    if len(states) < 5:
        raise ValueError("need at least five stored states")
    times = np.array([s.time for s in states])
    dt = np.diff(times)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * dt[0]:
        raise ValueError("outputs must be equally spaced")
    val, gphi, _ = _psi_parts(phi, grid)
    phib = [val * model.B_raw(s.rho) for s in states]
    out = []
    for k in range(2, len(states) - 2):
        st = states[k]
        u = st.velocity
        b = model.B_raw(st.rho)
        # written with differences so a constant sequence gives exactly zero
        dtb = (8.0 * (phib[k + 1] - phib[k - 1]) - (phib[k + 2] - phib[k - 2])) / (12.0 * dt[0])
        flux = grid.divergence(val * b * u)
        source = val * model.renormalization_coefficient(st.rho) * grid.divergence(u)
        rhs = b * np.sum(u * gphi, axis=0)
        res = dtb + flux + source - rhs
        scale = max(grid.l2_norm(dtb), grid.l2_norm(flux), grid.l2_norm(source),
                    grid.l2_norm(rhs))
        out.append(0.0 if scale == 0.0 else grid.l2_norm(res) / scale)
    return np.array(out)


# ----------------------------------------------------------------------
# weak formulation
# ----------------------------------------------------------------------
def _time_weight(t, t_end):
    w = math.pi / t_end
    s, c = math.sin(w * t), math.cos(w * t)
    return s ** 4, 4.0 * w * s ** 3 * c


def _abs_size(grid, densities, t_end):
    # the first density is hit by d/dt, the others are integrated over time
    sizes = [float(grid.integrate(np.abs(f))) for f in densities]
    return sizes[0] + t_end * max(sizes[1:])


def weak_form_residual(states, battery, models, grid):
    """Weak-form residuals for test functions ``eta(t) phi(x)``.

    ``eta = sin^4(pi t / T)`` vanishes to third order at both ends, which
    removes the initial and final terms and keeps the trapezoidal time
    quadrature accurate.  Each spatial test in ``battery`` gives one mass
    residual and ``dim`` momentum residuals, each relative to the sum of the
    magnitudes of its terms.  The capillary term carries all its
    derivatives on the test.

    Returns a dict with ``mass``, ``momentum`` (lists of relative
    residuals) and ``initial_trace`` (absolute errors at the first output).
    """
    times = np.array([s.time for s in states])
    t_end = times[-1] - times[0]
    cap, law = models.capillarity, models.pressure
    d = grid.dim
    report = {"mass": [], "momentum": [], "initial_trace": []}
    for phi in battery:
        v, gv = phi.value(grid), phi.gradient(grid)
        glap = phi.grad_laplacian(grid)
        mass_terms = []
        mom_terms = [[] for _ in range(d)]
        # integrals of absolute densities; cancellation below 1e-6 of them is
        # quadrature noise, so they floor the relative scale
        mass_ref = 0.0
        mom_ref = [0.0] * d
        for st in states:
            eta, deta = _time_weight(st.time - times[0], t_end)
            rho, m, u = st.rho, st.momentum, st.velocity
            dens = [rho * v, np.sum(m * gv, axis=0)]
            raw = [grid.integrate(f) for f in dens]
            mass_terms.append([deta * raw[0], eta * raw[1]])
            mass_ref = max(mass_ref, _abs_size(grid, dens, t_end))
            mu, lam = models.viscosity(rho)
            stress, _, _ = viscous_terms(grid, u, mu, lam)
            grho = grid.gradient(rho)
            coef = 0.5 * (cap.kappa(rho) + rho * cap.kappa_prime(rho))
            b = cap.B(rho, models.rho_bar)
            gA = grid.gradient(cap.A(rho, models.rho_bar))
            p = law.pressure(rho)
            for i in range(d):
                # test Phi = eta phi e_i; grad Phi has row i equal to grad phi
                conv = np.sum(m[i] * u * gv, axis=0)
                visc = np.sum(stress[i] * gv, axis=0)
                k_diag = b * glap[i] - coef * np.sum(grho * grho, axis=0) * gv[i]
                k_off = gA[i] * np.sum(gA * gv, axis=0)
                dens = [m[i] * v, conv, p * gv[i], -visc,
                        -models.capillary_sign * (k_diag - k_off)]
                raw = [grid.integrate(f) for f in dens]
                mom_terms[i].append([deta * raw[0]] + [eta * r for r in raw[1:]])
                mom_ref[i] = max(mom_ref[i], _abs_size(grid, dens, t_end))
        mass_terms = np.array(mass_terms)
        integrals = [trapezoid(mass_terms[:, j], times) for j in range(2)]
        scale = max(sum(map(abs, integrals)), 1e-6 * mass_ref)
        report["mass"].append(0.0 if scale == 0.0 else abs(sum(integrals)) / scale)
        for i in range(d):
            arr = np.array(mom_terms[i])
            integrals = [trapezoid(arr[:, j], times) for j in range(arr.shape[1])]
            scale = max(sum(map(abs, integrals)), 1e-6 * mom_ref[i])
            report["momentum"].append(0.0 if scale == 0.0 else abs(sum(integrals)) / scale)
        if len(states) > 1:
            report["initial_trace"].append(
                abs(float(grid.integrate((states[1].rho - states[0].rho) * v))))
    return report


# ----------------------------------------------------------------------
# large capillarity and Orlicz control
# ----------------------------------------------------------------------
def large_kappa_check(states, models, grid):
    """Compare ``sup_t ||grad A(rho)||`` with its initial-data bound.

    The bound is ``||grad A(rho_0)|| + (||sqrt(rho_0) u_0|| +
    ||rho_0 - rho_bar||_{L^gamma}^(gamma/2)) / kappa``.  Returns a dict with
    ``constant`` (the smallest C with ``sup <= C * bound``, 1 when both
    vanish) and ``growth`` (``sup / ||grad A(rho_0)||``).
    """
    cap = models.capillarity
    law = models.pressure
    kappa = getattr(cap, "kappa_coef", None)
    if kappa is None:
        raise TypeError("capillarity model has no scalar kappa")

    def grad_a(rho):
        return grid.l2_norm(grid.gradient(cap.A(rho, models.rho_bar)))

    sup = max(grad_a(s.rho) for s in states)
    s0 = states[0]
    ga0 = grad_a(s0.rho)
    kin0 = grid.l2_norm(np.sqrt(s0.rho) * s0.velocity)
    pot0 = grid.lp_norm(s0.rho - law.rho_bar, law.gamma) ** (law.gamma / 2.0)
    bound = ga0 + (kin0 + pot0) / kappa
    constant = 1.0 if sup == 0.0 and bound == 0.0 else sup / bound
    growth = 1.0 if ga0 == 0.0 else sup / ga0
    return {"sup_grad_A": sup, "grad_A0": ga0, "bound": bound,
            "constant": constant, "growth": growth, "kappa": kappa}


def orlicz_energy_check(states, models, grid, delta=1.0):
    """Sup over time of ``||rho - rho_bar||`` in the Orlicz class and in ``H^1``."""
    law = models.pressure
    orl, h1 = [], []
    for s in states:
        f = s.rho - law.rho_bar
        orl.append(orlicz_norm(f, grid, 2.0, law.gamma, delta))
        h1.append(float(grid.sobolev_norm(f, 1.0, homogeneous=False)))
    return {"sup_orlicz": max(orl), "sup_h1": max(h1),
            "rho_min": min(float(np.min(s.rho)) for s in states),
            "rho_max": max(float(np.max(s.rho)) for s in states)}
