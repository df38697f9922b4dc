"""Command line interface: ``nsk run | verify | tensor-check | dispersion | report``."""

import argparse
import csv
import json
from pathlib import Path
import sys

import numpy as np

from .config import load_config
from .errors import ParseError, ValidationError
from .korteweg import equivalence_residual
from .runner import run_scenario
from .spectral import Grid
from .verify import _capillarity, measure_dispersion, verify_suite


def _cmd_run(args):
    try:
        cfg = load_config(args.config)
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = args.out or f"nsk-run-{cfg.scenario}"
    report = run_scenario(cfg, out, dry_run=args.dry_run)
    if args.dry_run:
        print(json.dumps(report["config"], indent=2, sort_keys=True))
        for key, value in report["initial_norms"].items():
            print(f"{key} = {value:.6e}")
        return 0
    print(f"termination: {report['termination']}")
    if report.get("termination_detail"):
        print(f"  {report['termination_detail']}")
    for check in report["checks"]:
        mark = "PASS" if check["passed"] else "FAIL"
        print(f"{mark} {check['name']}: {check['measured']:.3e} (tol {check['tolerance']:.1e})")
    print(f"artifacts in {out}")
    return 0


def _cmd_verify(args):
    sign = -1.0 if args.flip_capillary_sign else 1.0
    results = verify_suite(args.level, capillary_sign=sign)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _cmd_tensor_check(args):
    grid = Grid(args.dim, args.n)
    if args.dim == 1:
        rho = 2.0 + np.sin(grid.coordinates[0])
    else:
        x, y = grid.coordinates
        rho = 2.0 + 0.3 * np.sin(x) * np.sin(y)
    res = equivalence_residual(rho, _capillarity(args.alpha, args.kappa), grid)
    ok = res <= 1e-8
    print(f"{'PASS' if ok else 'FAIL'} alpha={args.alpha} dim={args.dim} n={args.n} "
          f"residual={res:.3e} (tol 1e-8)")
    return 0 if ok else 1


def _cmd_dispersion(args):
    omega, expected = measure_dispersion(args.k, args.n, kappa=args.kappa,
                                         amplitude=args.amplitude)
    err = abs(omega / expected - 1.0)
    ok = err <= 5e-3
    print(f"k={args.k} n={args.n} omega_measured={omega:.8f} omega_expected={expected:.8f} "
          f"rel_error={err:.3e}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _cmd_report(args):
    run_dir = Path(args.run_dir)
    try:
        report = json.loads((run_dir / "report.json").read_text())
    except FileNotFoundError:
        print(f"no report.json in {run_dir}", file=sys.stderr)
        return 2
    cfg = report["config"]
    print(f"scenario {cfg['scenario']}: dim={cfg['dim']} n={cfg['n']} t_end={cfg['t_end']}")
    print(f"termination: {report['termination']}")
    for key, value in report.get("initial_norms", {}).items():
        print(f"  initial {key} = {value:.6e}")
    for key, value in report.get("final", {}).items():
        if isinstance(value, dict):
            for sub, v in value.items():
                print(f"  {key}.{sub} = {v}")
        else:
            print(f"  {key} = {value}")
    for check in report.get("checks", []):
        mark = "PASS" if check["passed"] else "FAIL"
        print(f"{mark} {check['name']}: {check['measured']:.3e} (tol {check['tolerance']:.1e})")
    csv_path = run_dir / "series.csv"
    if csv_path.exists():
        with open(csv_path) as fh:
            rows = list(csv.DictReader(fh))
        if rows:
            last = rows[-1]
            print(f"series: {len(rows)} rows, last t={float(last['t']):.6g} "
                  f"E={float(last['E']):.6e} budget_residual={float(last['budget_residual']):.3e}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="nsk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario from a JSON config")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default nsk-run-<scenario>)")
    p.add_argument("--dry-run", action="store_true", help="validate and echo the config only")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--flip-capillary-sign", action="store_true",
                   help="mutation check: reverse the capillary force")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("tensor-check", help="compare the two Korteweg tensor forms")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--dim", type=int, choices=(1, 2), default=1)
    p.add_argument("--kappa", type=float, default=1.0)
    p.set_defaults(func=_cmd_tensor_check)

    p = sub.add_parser("dispersion", help="measure the linear wave frequency")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=1e-4)
    p.set_defaults(func=_cmd_dispersion)

    p = sub.add_parser("report", help="summarise a finished run directory")
    p.add_argument("run_dir")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
