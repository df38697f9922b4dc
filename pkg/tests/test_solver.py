import csv

import numpy as np
import pytest
import sympy as sp

from nsk.config import parse_config
from nsk.constitutive import Critical, PowerLaw, PressureLaw, ViscosityModel
from nsk.errors import VacuumApproached
from nsk.manufactured import ManufacturedSolution
from nsk.runner import write_csv
from nsk.solver import advance, compute_rhs, run, stable_timestep
from nsk.spectral import Grid
from nsk.state import FlowState, Models


def _models(capillarity=None, mu=0.01, **kw):
    return Models(PressureLaw(1.0, 2.0, 1.0), ViscosityModel.constant(mu, 0.0),
                  capillarity or PowerLaw(1.0, 0.0), **kw)


def _smooth_state(grid, seed=0, amplitude=0.05, kmax=4):
    rng = np.random.default_rng(seed)
    rho = grid.dealias(1.0 + grid.random_field(rng, kmax, amplitude))
    u = np.stack([grid.random_field(rng, kmax, amplitude) for _ in range(grid.dim)])
    return FlowState(rho, grid.dealias(rho * u))


def _sympy_forcing(eps, models, alpha=None):
    """Forcing of the manufactured fields derived symbolically from the PDE."""
    x, t = sp.symbols("x t")
    r = sp.Symbol("r", positive=True)
    rho = 2 + eps * sp.sin(x) * sp.cos(t)
    u = eps * sp.sin(x) * sp.sin(t)
    law = models.pressure
    par = models.viscosity.params
    cap = models.capillarity
    kap = cap.kappa_coef * (r ** -2 if alpha is None else r ** alpha)
    k = kap.subs(r, rho)
    kp = sp.diff(kap, r).subs(r, rho)
    div_k = rho * sp.diff(k * sp.diff(rho, x, 2) + kp * sp.diff(rho, x) ** 2 / 2, x)
    flux = rho * u ** 2 + law.a * rho ** law.gamma - (2 * par["mu"] + par["lambda"]) * sp.diff(u, x)
    f_rho = sp.diff(rho, t) + sp.diff(rho * u, x)
    f_m = sp.diff(rho * u, t) + sp.diff(flux, x) - div_k
    return sp.lambdify((x, t), f_rho, "numpy"), sp.lambdify((x, t), f_m, "numpy")


class TestRightHandSide:
    def test_equilibrium_is_fixed_point(self):
        grid = Grid(2, 16)
        models = _models()
        state = FlowState(np.ones(grid.shape), np.zeros((2,) + grid.shape))
        drho, dm = compute_rhs(state, models, grid)
        assert np.max(np.abs(drho)) == 0.0
        assert np.max(np.abs(dm)) < 1e-14
        after = advance(state, 0.01, models, grid)
        assert np.max(np.abs(after.rho - 1.0)) < 1e-14

    def test_rhs_conserves_mass_and_momentum(self):
        grid = Grid(2, 32)
        state = _smooth_state(grid)
        drho, dm = compute_rhs(state, _models(), grid)
        assert abs(grid.integrate(drho)) < 1e-13
        assert np.max(np.abs(grid.integrate(dm))) < 1e-13

    def test_vacuum_raises(self):
        grid = Grid(1, 16)
        rho = 0.5 + 0.5 * np.cos(grid.coordinates[0])
        state = FlowState(rho + 1e-9, np.zeros((1,) + grid.shape))
        with pytest.raises(VacuumApproached) as err:
            compute_rhs(state, _models(rho_floor=1e-3), grid)
        assert err.value.rho_min < 1e-3

    def test_capillary_sign_flip_changes_force(self):
        grid = Grid(1, 32)
        state = _smooth_state(grid)
        base = compute_rhs(state, _models(mu=0.0), grid)[1]
        flipped = compute_rhs(state, _models(mu=0.0).with_sign(-1), grid)[1]
        assert np.max(np.abs(base - flipped)) > 1e-3


class TestManufactured:
    @pytest.mark.parametrize("capillarity,alpha", [(PowerLaw(0.5, 1.0), 1.0),
                                                   (Critical(0.3), None)])
    def test_forcing_matches_sympy(self, capillarity, alpha):
        grid = Grid(1, 32)
        models = _models(capillarity, mu=0.05)
        ms = ManufacturedSolution(grid, models, 0.1)
        f_rho, f_m = _sympy_forcing(0.1, models, alpha)
        x = grid.coordinates[0]
        for t in (0.0, 0.3, 1.7):
            got_rho, got_m = ms.forcing(t)
            assert np.max(np.abs(got_rho - f_rho(x, t))) < 1e-13
            assert np.max(np.abs(got_m[0] - f_m(x, t))) < 1e-12

    def test_exact_fields_solve_forced_system(self):
        grid = Grid(1, 16)
        models = _models(PowerLaw(0.5, 1.0))
        ms = ManufacturedSolution(grid, models, 0.1)
        for t in (0.2, 0.9):
            drho, dm = compute_rhs(ms.exact(t), models, grid, ms.forcing)
            er, em = ms.time_derivative(t)
            assert np.max(np.abs(drho - er)) < 1e-13
            assert np.max(np.abs(dm - em)) < 1e-13

    def test_rk4_fourth_order(self):
        grid = Grid(1, 16)
        models = _models(PowerLaw(0.5, 1.0))
        ms = ManufacturedSolution(grid, models, 0.1)
        errors = []
        for nsub in (10, 20, 40):
            res = run(ms.exact(0.0), models, grid, 0.5, 0.5, substeps=nsub, forcing=ms.forcing)
            errors.append(np.max(np.abs(res.state.rho - ms.exact(0.5).rho)))
        orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert np.all(orders > 3.7), orders

    def test_rejects_unsupported_setups(self):
        with pytest.raises(ValueError):
            ManufacturedSolution(Grid(2, 16), _models(), 0.1)
        models = Models(PressureLaw(), ViscosityModel.linear(1.0), PowerLaw(1.0, 0.0))
        with pytest.raises(ValueError):
            ManufacturedSolution(Grid(1, 16), models, 0.1)


class TestTimestep:
    def test_formula(self):
        grid = Grid(1, 32)
        models = _models(PowerLaw(2.0, 0.0), mu=0.1)
        state = FlowState(np.full(grid.shape, 1.0), np.full((1,) + grid.shape, 0.5))
        dx = grid.dx
        expected = min(dx / (0.5 + np.sqrt(2.0)), dx ** 2 / (4 * 0.2),
                       dx ** 2 / (2 * np.pi * np.sqrt(2.0)))
        assert stable_timestep(state, models, grid, cfl=0.5) == pytest.approx(0.5 * expected)

    def test_stable_at_dt_and_unstable_at_four_times(self):
        # the 2/3 mask caps |k| < n/3; in 2D |xi|^2 reaches twice the 1D value,
        # which puts 4x the dispersive limit outside the RK4 stability region
        grid = Grid(2, 16)
        models = _models()
        state = _smooth_state(grid, seed=0, amplitude=0.05, kmax=4)
        dt = stable_timestep(state, models, grid, cfl=1.0)
        ok = run(state, models, grid, 1000 * dt, 1000 * dt, substeps=1000)
        assert ok.reason == "completed" and ok.steps == 1000
        assert np.max(np.abs(ok.state.rho - 1.0)) < 0.1
        bad = run(state, models, grid, 1000 * 4 * dt, 1000 * 4 * dt, substeps=1000)
        assert bad.reason in ("blowup", "vacuum")


class TestRun:
    def test_reversibility_inviscid(self):
        grid = Grid(1, 64)
        models = _models(mu=0.0)
        start = _smooth_state(grid, seed=2)
        fwd = run(start, models, grid, 0.5, 0.5, cfl=0.5)
        back = FlowState(fwd.state.rho, -fwd.state.momentum, 0.0)
        rev = run(back, models, grid, 0.5, 0.5, cfl=0.5)
        assert np.max(np.abs(rev.state.rho - start.rho)) < 1e-9
        assert np.max(np.abs(rev.state.momentum + start.momentum)) < 1e-9

    def test_conservation_short_run_2d(self):
        grid = Grid(2, 16)
        state = _smooth_state(grid, seed=1)
        res = run(state, _models(), grid, 0.5, 0.1)
        mass = np.array(res.series.mass)
        mom = np.array(res.series.momentum)
        assert np.max(np.abs(mass - mass[0])) / mass[0] < 1e-13
        assert np.max(np.abs(mom - mom[0])) < 1e-12

    def test_energy_decreases_with_viscosity(self):
        grid = Grid(1, 64)
        res = run(_smooth_state(grid, amplitude=0.2), _models(mu=0.05), grid, 1.0, 0.1)
        e = np.array(res.series.energy)
        assert np.all(np.diff(e) < 0)
        assert np.max(np.abs(res.series.budget_residual)) < 1e-6 * e[0]

    def test_vacuum_termination(self):
        grid = Grid(1, 64)
        x = grid.coordinates[0]
        rho = 1.0 - 0.9 * np.sin(x / 2) ** 8
        u = -2.0 * np.sin(x)
        models = _models(PowerLaw(0.01, 0.0), rho_floor=0.05)
        res = run(FlowState(rho, (rho * u)[None]), models, grid, 2.0, 0.1)
        assert res.reason == "vacuum"
        assert "fell below floor" in res.error
        assert res.state.time < 2.0

    def test_row_count_and_csv(self, tmp_path):
        grid = Grid(1, 32)
        res = run(_smooth_state(grid), _models(), grid, 1.0, 0.3)
        assert len(res.series) == 4  # t = 0, 0.3, 0.6, 0.9
        assert res.state.time == pytest.approx(1.0)
        path = tmp_path / "series.csv"
        write_csv(res.series, path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == list(res.series.columns)
        assert len(rows) == 5
        assert float(rows[2][0]) == pytest.approx(0.3)

    def test_keep_states_and_callback(self):
        grid = Grid(1, 32)
        seen = []
        res = run(_smooth_state(grid), _models(), grid, 0.2, 0.1, keep_states=True,
                  callback=lambda s, series: seen.append(s.time))
        assert [s.time for s in res.states] == pytest.approx([0.0, 0.1, 0.2])
        assert seen == pytest.approx([0.1, 0.2])

    def test_rejects_bad_interval(self):
        grid = Grid(1, 16)
        with pytest.raises(ValueError):
            run(_smooth_state(grid), _models(), grid, 1.0, 0.0)


def test_config_models_drive_solver():
    cfg = parse_config('{"domain": {"dim": 1, "n": 32}, "scenario": {"id": "large-data-1d"}}')
    models = cfg.models()
    grid = cfg.grid()
    state = FlowState(np.ones(grid.shape), np.zeros((1,) + grid.shape))
    assert np.max(np.abs(compute_rhs(state, models, grid)[1])) < 1e-14
