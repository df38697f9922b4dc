"""
Run a configured scenario and persist its series and report.

Artifacts in the output directory:

``series.csv``
    One row per output time; columns as in
    :attr:`nsk.diagnostics.DiagnosticsSeries.columns`.  Floats are written
    with ``repr`` so reruns are byte-identical.
``report.json``
    Config echo, termination reason, initial norms, final diagnostics and
    per-run check verdicts (each with measured value and tolerance).
"""

import csv
import json
from pathlib import Path

import numpy as np

from . import diagnostics as dg
from .constitutive import Critical, viscosity_validate
from .manufactured import ManufacturedSolution
from .scenarios import build_initial, initial_norms
from .solver import run

__all__ = ["run_scenario", "write_csv", "verdict"]


def verdict(name, measured, tolerance, passed=None):
    measured = float(measured)
    if passed is None:
        passed = bool(measured <= tolerance)
    return {"name": name, "measured": measured, "tolerance": float(tolerance),
            "passed": bool(passed)}


def write_csv(series, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(series.columns)
        for row in series.rows():
            writer.writerow([repr(float(v)) for v in row])


def _phi(cfg):
    if cfg.phi is None:
        return None
    return dg.Bump(tuple(cfg.phi["center"]), cfg.phi["radius"])


def _checks(cfg, result, models, grid):
    s = result.series
    out = []
    mass = np.asarray(s.mass)
    out.append(verdict("mass_conservation", np.max(np.abs(mass - mass[0])) / abs(mass[0]), 1e-12))
    if cfg.scenario != "manufactured":
        mom = np.asarray(s.momentum)
        out.append(verdict("momentum_conservation", np.max(np.abs(mom - mom[0])), 1e-10))
        e0 = s.energy[0]
        r = np.max(np.abs(s.budget_residual))
        out.append(verdict("energy_budget", r / e0 if e0 > 0 else r, 1e-6))
    gap = np.max(np.abs(np.asarray(s.energy) - np.asarray(s.energy_gamma)))
    out.append(verdict("gamma_energy_identity", gap, 1e-10 * max(1.0, max(s.energy))))
    return out


def run_scenario(cfg, out_dir=None, dry_run=False):
    """Execute ``cfg`` and return the report dictionary.

    With ``dry_run`` only the validated config and initial norms are
    reported; nothing is integrated or written except ``report.json``.
    """
    grid = cfg.grid()
    models = cfg.models()
    state = build_initial(cfg, grid, models)
    report = {
        "config": cfg.to_dict(),
        "initial_norms": initial_norms(state, models, grid),
        "viscosity_check": vars(viscosity_validate(
            models.viscosity, (1e-3 * cfg.rho_bar, 10 * cfg.rho_bar), cfg.dim, strict=False)),
    }
    if dry_run:
        report["termination"] = "dry-run"
        _write_report(report, out_dir)
        return report
    forcing = None
    if cfg.scenario == "manufactured":
        forcing = ManufacturedSolution(grid, models, cfg.amplitude).forcing
    result = run(state, models, grid, cfg.t_end, cfg.output_interval, cfl=cfg.cfl,
                 substeps=cfg.substeps, forcing=forcing, keep_states=True,
                 ball_radius=cfg.ball_radius)
    states = result.states
    phi = _phi(cfg)
    final = {
        "time": result.state.time,
        "steps": result.steps,
        "energy": result.series.energy[-1],
        "budget_residual": result.series.budget_residual[-1],
        "rho_min": result.series.rho_min[-1],
        "rho_max": result.series.rho_max[-1],
        "concentration_max": max(result.series.concentration_max),
        "gain_norm": dg.gain_norm(states, phi, cfg.s, models.capillarity, grid, cfg.rho_bar),
        "orlicz": dg.orlicz_energy_check(states, models, grid, cfg.delta_orlicz),
    }
    if isinstance(models.capillarity, Critical):
        norm, weighted = dg.integrability_gain(states, phi, cfg.alpha_gain, models, grid)
        final["integrability_gain"] = {"norm_gamma_alpha": norm, "weighted_gradient": weighted}
    if cfg.scenario == "large-kappa":
        final["large_kappa"] = dg.large_kappa_check(states, models, grid)
    if cfg.scenario == "manufactured":
        exact = ManufacturedSolution(grid, models, cfg.amplitude).exact(result.state.time)
        final["manufactured_error"] = float(np.max(np.abs(result.state.rho - exact.rho)))
    report["termination"] = result.reason
    report["termination_detail"] = result.error
    report["final"] = final
    report["checks"] = _checks(cfg, result, models, grid)
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        write_csv(result.series, Path(out_dir) / "series.csv")
    _write_report(report, out_dir)
    return report


def _write_report(report, out_dir):
    if out_dir is None:
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    with open(path / "report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")
