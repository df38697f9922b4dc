"""
JSON run configuration.

Only ``domain.dim``, ``domain.n`` and ``scenario.id`` are required; every
other key has a default.  The capillarity law, perturbation amplitude and
gain exponent ``s`` default per scenario and dimension.
"""

from dataclasses import asdict, dataclass, field
import json
import math
from pathlib import Path
from typing import Optional

from .constitutive import (
    Critical,
    OneD,
    PiecewiseConstant,
    PowerLaw,
    PressureLaw,
    ViscosityModel,
    viscosity_validate,
)
from .errors import ParseError, ValidationError
from .spectral import Grid
from .state import Models

__all__ = ["SimulationConfig", "load_config", "parse_config", "SCENARIOS"]

SCENARIOS = (
    "small-data-2d",
    "large-data-1d",
    "vacuum-approach",
    "large-kappa",
    "critical-capillarity",
    "manufactured",
)

_DEFAULT_CAPILLARITY = {
    "small-data-2d": {"model": "power", "kappa": 1.0, "alpha": 0.0},
    "large-data-1d": {"model": "oned", "kappa": 1.0, "rho_threshold": 0.2, "epsilon": 0.0},
    "vacuum-approach": {"model": "power", "kappa": 0.01, "alpha": 0.0},
    "large-kappa": {"model": "power", "kappa": 100.0, "alpha": 0.0},
    "critical-capillarity": {"model": "critical", "kappa": 1.0},
    "manufactured": {"model": "power", "kappa": 0.5, "alpha": 1.0},
}

_SECTIONS = {
    "domain": {"dim", "n", "length"},
    "time": {"t_end", "cfl", "output_interval", "substeps"},
    "pressure": {"a", "gamma", "rho_bar"},
    "viscosity": {"model", "mu", "lambda", "c", "s0", "mu0", "mu_exp", "lambda0", "lambda_exp"},
    "capillarity": {"model", "kappa", "alpha", "rho_threshold", "epsilon"},
    "scenario": {"id", "amplitude", "wavenumber", "seed", "floor_multiple"},
    "diagnostics": {"s", "ball_radius", "alpha_gain", "phi", "delta_orlicz"},
    "solver": {"rho_floor"},
}


@dataclass
class SimulationConfig:
    dim: int
    n: int
    scenario: str
    length: float = 2.0 * math.pi
    t_end: float = 1.0
    cfl: float = 0.25
    output_interval: Optional[float] = None
    substeps: Optional[int] = None
    pressure: dict = field(default_factory=lambda: {"a": 1.0, "gamma": 2.0, "rho_bar": 1.0})
    viscosity: dict = field(default_factory=lambda: {"model": "constant", "mu": 0.01,
                                                     "lambda": 0.0})
    capillarity: dict = field(default_factory=dict)
    amplitude: Optional[float] = None
    wavenumber: int = 1
    seed: int = 0
    floor_multiple: float = 2.0
    s: Optional[float] = None
    ball_radius: Optional[float] = None
    alpha_gain: float = 1.0
    phi: Optional[dict] = None
    delta_orlicz: float = 1.0
    rho_floor: Optional[float] = None

    # ------------------------------------------------------------------
    def grid(self):
        return Grid(self.dim, self.n, self.length)

    @property
    def rho_bar(self):
        return float(self.pressure["rho_bar"])

    @property
    def floor(self):
        return self.rho_floor if self.rho_floor is not None else 1e-6 * self.rho_bar

    def pressure_law(self):
        p = self.pressure
        return PressureLaw(float(p["a"]), float(p["gamma"]), float(p["rho_bar"]))

    def viscosity_model(self):
        v = self.viscosity
        kind = v.get("model", "constant")
        if kind == "constant":
            return ViscosityModel.constant(v.get("mu", 0.01), v.get("lambda", 0.0))
        if kind == "inviscid":
            return ViscosityModel.constant(0.0, 0.0)
        if kind == "linear":
            return ViscosityModel.linear(v.get("c", 1.0), v.get("s0", 1.0))
        if kind == "power":
            return ViscosityModel.power(v.get("mu0", 0.01), v.get("mu_exp", 0.0),
                                        v.get("lambda0", 0.0), v.get("lambda_exp", 0.0))
        raise ValidationError("viscosity.model", f"unknown viscosity model {kind!r}")

    def capillarity_model(self):
        c = self.capillarity
        kind = c.get("model", "power")
        kappa = float(c.get("kappa", 1.0))
        if kind == "power":
            alpha = float(c.get("alpha", 0.0))
            if alpha == -2:
                return Critical(kappa)
            return PowerLaw(kappa, alpha)
        if kind == "critical":
            return Critical(kappa)
        if kind in ("piecewise", "oned"):
            cls = OneD if kind == "oned" else PiecewiseConstant
            return cls(float(c.get("rho_threshold", 0.2)), kappa, float(c.get("epsilon", 0.0)))
        raise ValidationError("capillarity.model", f"unknown capillarity model {kind!r}")

    def models(self):
        return Models(self.pressure_law(), self.viscosity_model(), self.capillarity_model(),
                      rho_floor=self.floor)

    def to_dict(self):
        return asdict(self)


def _number(section, key, value, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", key=f"{section}.{key}")
    if kind is int:
        if float(value) != int(value):
            raise ParseError(f"expected an integer, got {value!r}", key=f"{section}.{key}")
        return int(value)
    return float(value)


def parse_config(text):
    """Parse and validate configuration text.

    Raises
    ------
    ParseError
        Malformed JSON (with line number), unknown or mistyped keys.
    ValidationError
        A parsed value breaks an invariant; ``invariant`` names it.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object", line=1)
    for section, body in raw.items():
        if section not in _SECTIONS:
            raise ParseError("unknown section", key=section)
        if not isinstance(body, dict):
            raise ParseError("section must be an object", key=section)
        for key in body:
            if key not in _SECTIONS[section]:
                raise ParseError("unknown key", key=f"{section}.{key}")
    domain = raw.get("domain", {})
    scen = raw.get("scenario", {})
    for sec, key, body in (("domain", "dim", domain), ("domain", "n", domain),
                           ("scenario", "id", scen)):
        if key not in body:
            raise ParseError("missing required key", key=f"{sec}.{key}")
    sid = scen["id"]
    if sid not in SCENARIOS:
        raise ValidationError("scenario.id", f"unknown scenario {sid!r}; expected one of {SCENARIOS}")

    cfg = SimulationConfig(dim=_number("domain", "dim", domain["dim"], int),
                           n=_number("domain", "n", domain["n"], int), scenario=sid)
    if "length" in domain:
        cfg.length = _number("domain", "length", domain["length"])

    tim = raw.get("time", {})
    for key in ("t_end", "cfl", "output_interval"):
        if key in tim:
            setattr(cfg, key, _number("time", key, tim[key]))
    if "substeps" in tim:
        cfg.substeps = _number("time", "substeps", tim["substeps"], int)

    pres = dict(cfg.pressure)
    for key, value in raw.get("pressure", {}).items():
        pres[key] = _number("pressure", key, value)
    cfg.pressure = pres

    visc = raw.get("viscosity")
    if visc is not None:
        cfg.viscosity = {k: (v if k == "model" else _number("viscosity", k, v))
                         for k, v in visc.items()}
    cap = dict(_DEFAULT_CAPILLARITY[sid])
    if "capillarity" in raw:
        given = raw["capillarity"]
        if "model" in given and given["model"] != cap.get("model"):
            cap = {}
        for k, v in given.items():
            cap[k] = v if k == "model" else _number("capillarity", k, v)
    cfg.capillarity = cap

    for key in ("amplitude", "floor_multiple"):
        if key in scen:
            setattr(cfg, key, _number("scenario", key, scen[key]))
    for key in ("wavenumber", "seed"):
        if key in scen:
            setattr(cfg, key, _number("scenario", key, scen[key], int))

    diag = raw.get("diagnostics", {})
    for key in ("s", "ball_radius", "alpha_gain", "delta_orlicz"):
        if key in diag:
            setattr(cfg, key, _number("diagnostics", key, diag[key]))
    if "phi" in diag:
        phi = diag["phi"]
        if not isinstance(phi, dict) or set(phi) - {"center", "radius"}:
            raise ParseError("phi needs center and radius", key="diagnostics.phi")
        center = phi.get("center")
        if not isinstance(center, list) or len(center) != cfg.dim:
            raise ParseError("phi.center must list one coordinate per dimension",
                             key="diagnostics.phi.center")
        cfg.phi = {"center": [_number("diagnostics", "phi.center", c) for c in center],
                   "radius": _number("diagnostics", "phi.radius", phi.get("radius"))}
    solver = raw.get("solver", {})
    if "rho_floor" in solver:
        cfg.rho_floor = _number("solver", "rho_floor", solver["rho_floor"])
    _fill_defaults(cfg)
    validate(cfg)
    return cfg


def _fill_defaults(cfg):
    if cfg.output_interval is None:
        cfg.output_interval = cfg.t_end / 10.0 if cfg.t_end > 0 else 1.0
    if cfg.amplitude is None:
        cfg.amplitude = {"small-data-2d": 1e-3, "large-data-1d": 0.5, "vacuum-approach": 2.0,
                         "large-kappa": 0.1, "critical-capillarity": 1e-3,
                         "manufactured": 0.1}[cfg.scenario]
    if cfg.s is None:
        cfg.s = 0.4 if cfg.dim == 1 else 1.0


def validate(cfg):
    """Raise :class:`ValidationError` naming the first broken invariant."""
    checks = [
        (cfg.dim in (1, 2), "domain.dim", "dim must be 1 or 2"),
        (cfg.n >= 8 and not cfg.n & (cfg.n - 1), "domain.n", "n must be a power of two >= 8"),
        (cfg.length > 0, "domain.length", "length must be positive"),
        (cfg.t_end > 0, "time.t_end", "t_end must be positive"),
        (0 < cfg.cfl <= 1, "time.cfl", "cfl must lie in (0, 1]"),
        (cfg.output_interval > 0, "time.output_interval", "output_interval must be positive"),
        (cfg.substeps is None or cfg.substeps >= 1, "time.substeps", "substeps must be >= 1"),
        (cfg.pressure["gamma"] > 1, "pressure.gamma", "gamma > 1 required"),
        (cfg.pressure["a"] > 0, "pressure.a", "a > 0 required"),
        (cfg.pressure["rho_bar"] > 0, "pressure.rho_bar", "rho_bar > 0 required"),
        (cfg.floor > 0, "solver.rho_floor", "rho_floor must be positive"),
        (cfg.delta_orlicz > 0, "diagnostics.delta_orlicz", "delta_orlicz must be positive"),
        (cfg.alpha_gain > 0, "diagnostics.alpha_gain", "alpha_gain must be positive"),
        (cfg.ball_radius is None or cfg.ball_radius > 0, "diagnostics.ball_radius",
         "ball_radius must be positive"),
    ]
    for ok, invariant, message in checks:
        if not ok:
            raise ValidationError(invariant, message)
    upper = 2.0 if cfg.dim == 2 else 0.5
    if not 0 <= cfg.s < upper:
        raise ValidationError("diagnostics.s", f"s must lie in [0, {upper}) when dim = {cfg.dim}")
    if cfg.scenario in ("small-data-2d", "critical-capillarity") and cfg.dim != 2:
        raise ValidationError("domain.dim", f"{cfg.scenario} is two-dimensional")
    if cfg.scenario in ("large-data-1d", "vacuum-approach", "manufactured") and cfg.dim != 1:
        raise ValidationError("domain.dim", f"{cfg.scenario} is one-dimensional")
    if cfg.phi is not None and not 0 < cfg.phi["radius"] < cfg.length / 2:
        raise ValidationError("diagnostics.phi.radius", "phi radius must lie in (0, length/2)")
    try:
        cap = cfg.capillarity_model()
        cfg.pressure_law()
        visc = cfg.viscosity_model()
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError("constitutive", str(exc)) from None
    if cfg.scenario == "manufactured" and not isinstance(cap, (PowerLaw, Critical)):
        raise ValidationError("capillarity.model", "manufactured needs a power or critical law")
    if cfg.scenario == "manufactured" and visc.name != "constant":
        raise ValidationError("viscosity.model", "manufactured needs constant viscosity")
    report = viscosity_validate(visc, (1e-3 * cfg.rho_bar, 10 * cfg.rho_bar), cfg.dim,
                                strict=False)
    if "two_mu_plus_n_lambda_nonnegative" in report.failures or report.min_mu < 0:
        raise ValidationError("viscosity", "need mu >= 0 and 2 mu + N lambda >= 0")
    return cfg


def load_config(path):
    return parse_config(Path(path).read_text())
