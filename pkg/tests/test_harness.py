import json
from pathlib import Path

import pytest

from nsk.cli import main
from nsk.config import SCENARIOS, load_config, parse_config
from nsk.errors import ParseError, ValidationError
from nsk.runner import run_scenario

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _cfg(**sections):
    base = {"domain": {"dim": 1, "n": 16}, "scenario": {"id": "large-data-1d"}}
    for name, body in sections.items():
        base.setdefault(name, {}).update(body)
    return json.dumps(base)


def _tiny_run_config(tmp_path):
    path = tmp_path / "tiny.json"
    path.write_text(_cfg(time={"t_end": 0.05, "output_interval": 0.01},
                         scenario={"amplitude": 0.1}, diagnostics={"s": 0.2}))
    return path


class TestParse:
    def test_defaults(self):
        cfg = parse_config(_cfg())
        assert cfg.cfl == 0.25
        assert cfg.floor == pytest.approx(1e-6)
        assert cfg.delta_orlicz == 1.0
        assert cfg.output_interval == pytest.approx(0.1)
        assert cfg.s == 0.4
        assert cfg.capillarity["model"] == "oned"

    def test_malformed_json_reports_line(self):
        with pytest.raises(ParseError) as err:
            parse_config('{\n  "domain": {"dim": 1,\n  "n": }\n}')
        assert err.value.line == 3

    @pytest.mark.parametrize("text,key", [
        (_cfg(domain={"width": 3}), "domain.width"),
        (_cfg(extras={}), "extras"),
        (_cfg(time={"t_end": "long"}), "time.t_end"),
        (_cfg(domain={"n": 16.5}), "domain.n"),
        (json.dumps({"domain": {"dim": 1}, "scenario": {"id": "manufactured"}}), "domain.n"),
    ])
    def test_key_errors(self, text, key):
        with pytest.raises(ParseError) as err:
            parse_config(text)
        assert err.value.key == key

    @pytest.mark.parametrize("sections,invariant", [
        ({"time": {"cfl": 1.5}}, "time.cfl"),
        ({"time": {"t_end": 0}}, "time.t_end"),
        ({"domain": {"n": 24}}, "domain.n"),
        ({"diagnostics": {"s": 0.5}}, "diagnostics.s"),
        ({"domain": {"dim": 2}}, "domain.dim"),
        ({"solver": {"rho_floor": 0}}, "solver.rho_floor"),
        ({"viscosity": {"model": "constant", "mu": 1.0, "lambda": -3.0}}, "viscosity"),
        ({"capillarity": {"model": "bogus"}}, "capillarity.model"),
        ({"scenario": {"id": "nowhere"}}, "scenario.id"),
    ])
    def test_validation_errors(self, sections, invariant):
        with pytest.raises(ValidationError) as err:
            parse_config(_cfg(**sections))
        assert err.value.invariant == invariant

    def test_two_dimensional_s_range(self):
        text = json.dumps({"domain": {"dim": 2, "n": 16}, "scenario": {"id": "small-data-2d"},
                           "diagnostics": {"s": 1.9}})
        assert parse_config(text).s == 1.9

    def test_manufactured_needs_constant_viscosity(self):
        text = json.dumps({"domain": {"dim": 1, "n": 16}, "scenario": {"id": "manufactured"},
                           "viscosity": {"model": "linear", "c": 1.0}})
        with pytest.raises(ValidationError):
            parse_config(text)

    @pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
    def test_shipped_configs_load(self, path):
        assert load_config(path).scenario in SCENARIOS

    def test_every_scenario_has_a_config(self):
        found = {load_config(p).scenario for p in CONFIGS.glob("*.json")}
        assert found == set(SCENARIOS)


class TestRunner:
    def test_dry_run(self, tmp_path):
        cfg = load_config(_tiny_run_config(tmp_path))
        report = run_scenario(cfg, tmp_path / "dry", dry_run=True)
        assert report["termination"] == "dry-run"
        assert (tmp_path / "dry" / "report.json").exists()
        assert not (tmp_path / "dry" / "series.csv").exists()
        assert report["initial_norms"]["rho_min"] > 0

    def test_run_is_deterministic(self, tmp_path):
        cfg = load_config(_tiny_run_config(tmp_path))
        run_scenario(cfg, tmp_path / "a")
        run_scenario(cfg, tmp_path / "b")
        a = (tmp_path / "a" / "series.csv").read_bytes()
        assert a == (tmp_path / "b" / "series.csv").read_bytes()
        assert len(a.splitlines()) == 1 + 6
        report = json.loads((tmp_path / "a" / "report.json").read_text())
        assert report["termination"] == "completed"
        assert all(c["passed"] for c in report["checks"])

    def test_manufactured_report(self, tmp_path):
        text = json.dumps({"domain": {"dim": 1, "n": 16}, "scenario": {"id": "manufactured"},
                           "time": {"t_end": 0.2, "output_interval": 0.1, "substeps": 10}})
        report = run_scenario(parse_config(text))
        assert report["final"]["manufactured_error"] < 1e-6
        assert {c["name"] for c in report["checks"]} == {"mass_conservation",
                                                         "gamma_energy_identity"}

    def test_vacuum_scenario_terminates(self):
        text = json.dumps({"domain": {"dim": 1, "n": 64}, "scenario": {"id": "vacuum-approach"},
                           "solver": {"rho_floor": 0.01}, "time": {"t_end": 2.0}})
        report = run_scenario(parse_config(text))
        assert report["termination"] == "vacuum"
        assert "floor" in report["termination_detail"]


class TestCli:
    def test_run_and_report(self, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", str(_tiny_run_config(tmp_path)), "--out", str(out)]) == 0
        assert (out / "series.csv").exists()
        assert main(["report", str(out)]) == 0
        text = capsys.readouterr().out
        assert "termination: completed" in text and "series: 6 rows" in text

    def test_dry_run_echoes_config(self, tmp_path, capsys):
        assert main(["run", str(_tiny_run_config(tmp_path)), "--dry-run",
                     "--out", str(tmp_path / "d")]) == 0
        assert '"scenario": "large-data-1d"' in capsys.readouterr().out

    def test_bad_config_exit_code(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(_cfg(time={"cfl": 2.0}))
        assert main(["run", str(path)]) == 2
        assert "time.cfl" in capsys.readouterr().err

    def test_report_missing(self, tmp_path):
        assert main(["report", str(tmp_path)]) == 2

    def test_tensor_check(self, capsys):
        assert main(["tensor-check", "--alpha", "-1", "--n", "64"]) == 0
        assert capsys.readouterr().out.startswith("PASS")

    def test_dispersion(self, capsys):
        assert main(["dispersion", "--k", "1", "--n", "32"]) == 0
        assert "rel_error" in capsys.readouterr().out

    def test_module_entry_point(self):
        import subprocess
        import sys
        done = subprocess.run([sys.executable, "-m", "nsk", "--help"], capture_output=True,
                              text=True)
        assert done.returncode == 0 and "verify" in done.stdout
