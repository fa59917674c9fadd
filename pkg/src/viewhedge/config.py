"""Run configuration: TOML sections, defaults, flag overrides, validation.

Sections: option, view, vol_model, simulation, sweep, variance, output.
Every validation failure is reported as a ConfigError whose message starts
with the offending section.key path.
"""
from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass
from typing import Any, Optional

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from .errors import ConfigError, DomainError
from .greeks import OptionSpec
from .hedge import MarketView
from .mc import SimConfig, Strategy
from .vol_models import CIR, LinearDrift, OrnsteinUhlenbeck, VolProcessSpec, validate

OUTPUT_DIR_ENV = "VIEWHEDGE_OUTPUT_DIR"

# The built-in benchmark configuration loaded by --paper-defaults: at-the-money
# call, 0.02y holding interval, growth view equal to the funding rate, linear
# vol drift, 1e5 paths.
BENCHMARK_DEFAULTS: dict[str, dict[str, Any]] = {
    "option": {"spot": 100.0, "strike": 100.0, "rate": 0.05, "vol_hat": 0.2, "maturity": 0.1},
    "view": {"mu": 0.05, "dt": 0.02},
    "vol_model": {"kind": "LinearDrift", "sigma0": 0.2, "mu_sigma": 0.2},
    "simulation": {
        "n_paths": 100000,
        "seed": 20260814,
        "sigma_mode": "deterministic",
        "n_substeps": 1,
        "strategies": ["BSM", "Mastinsek", "Star"],
    },
    "sweep": {
        "mu_min": -0.5, "mu_max": 0.5, "mu_points": 51,
        "mu_sigma_min": -0.5, "mu_sigma_max": 0.5, "mu_sigma_points": 51,
    },
    "variance": {
        "lambda1_min": -5.0, "lambda1_max": 5.0, "lambda1_points": 101,
        "lambda2_min": -5.0, "lambda2_max": 5.0, "lambda2_points": 101,
    },
    "output": {"directory": "", "formats": ["csv"]},
}

_SECTIONS = tuple(BENCHMARK_DEFAULTS)

_KNOWN_KEYS = {
    "option": ("spot", "strike", "rate", "vol_hat", "maturity"),
    "view": ("mu", "dt"),
    "vol_model": ("kind", "sigma0", "mu_sigma", "kappa", "theta_bar", "alpha"),
    "simulation": ("n_paths", "seed", "sigma_mode", "n_substeps", "strategies"),
    "sweep": ("mu_grid", "mu_sigma_grid", "mu_min", "mu_max", "mu_points",
              "mu_sigma_min", "mu_sigma_max", "mu_sigma_points"),
    "variance": ("lambda1_min", "lambda1_max", "lambda1_points",
                 "lambda2_min", "lambda2_max", "lambda2_points"),
    "output": ("directory", "formats"),
}

_OVERRIDE_RE = re.compile(r"--([A-Za-z_][A-Za-z0-9_]*)\.([A-Za-z_][A-Za-z0-9_]*)=(.*)", re.S)


def load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"config file {path!r}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path!r}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path!r}: top level must be a table")
    return data


def benchmark_defaults() -> dict:
    return copy.deepcopy(BENCHMARK_DEFAULTS)


def merge(base: dict, extra: dict) -> dict:
    """Section-wise merge; keys in extra win."""
    out = copy.deepcopy(base)
    for section, table in extra.items():
        if isinstance(table, dict):
            out.setdefault(section, {}).update(table)
        else:
            out[section] = table
    return out


def parse_override(arg: str) -> tuple[str, str, Any]:
    """Parse a --section.key=value flag; value uses TOML literal syntax.

    Unparseable values are taken as bare strings, so --simulation.sigma_mode=
    stochastic works without quoting.
    """
    m = _OVERRIDE_RE.fullmatch(arg)
    if not m:
        raise ConfigError(
            f"unrecognized argument {arg!r}; overrides take the form --section.key=value"
        )
    section, key, raw = m.group(1), m.group(2), m.group(3)
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw
    return section, key, value


def apply_overrides(data: dict, overrides: list[str]) -> dict:
    out = copy.deepcopy(data)
    for arg in overrides:
        section, key, value = parse_override(arg)
        out.setdefault(section, {})[key] = value
    return out


def check_known_keys(data: dict) -> None:
    for section, table in data.items():
        if section not in _SECTIONS:
            raise ConfigError(f"{section}: unknown config section")
        if not isinstance(table, dict):
            raise ConfigError(f"{section}: must be a table of keys")
        for key in table:
            if key not in _KNOWN_KEYS[section]:
                raise ConfigError(f"{section}.{key}: unknown key")


def _get(data: dict, section: str, key: str, required: bool = True, default: Any = None) -> Any:
    table = data.get(section)
    if table is None or key not in table:
        if required:
            raise ConfigError(f"{section}.{key}: required key is missing")
        return default
    return table[key]


def _number(data: dict, section: str, key: str, required: bool = True,
            default: float = None) -> float:
    v = _get(data, section, key, required, default)
    if v is None:
        return v
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{section}.{key}: expected a finite number, got {v!r}")
    return float(v)


def _integer(data: dict, section: str, key: str, required: bool = True,
             default: int = None) -> int:
    v = _get(data, section, key, required, default)
    if v is None:
        return v
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{section}.{key}: expected an integer, got {v!r}")
    return v


def _string(data: dict, section: str, key: str, required: bool = True,
            default: str = None) -> str:
    v = _get(data, section, key, required, default)
    if v is None:
        return v
    if not isinstance(v, str):
        raise ConfigError(f"{section}.{key}: expected a string, got {v!r}")
    return v


def build_option(data: dict) -> OptionSpec:
    kwargs = {key: _number(data, "option", key) for key in _KNOWN_KEYS["option"]}
    try:
        return OptionSpec(**kwargs)
    except DomainError as exc:
        raise ConfigError(f"option.{exc}") from exc


def build_vol_model(data: dict) -> VolProcessSpec:
    kind = _string(data, "vol_model", "kind")
    sigma0 = _number(data, "vol_model", "sigma0")
    table = data.get("vol_model", {})
    if kind == "LinearDrift":
        extra = [k for k in ("kappa", "theta_bar", "alpha") if k in table]
        if extra:
            raise ConfigError(f"vol_model.{extra[0]}: not a LinearDrift parameter")
        proc: VolProcessSpec = LinearDrift(
            mu_sigma=_number(data, "vol_model", "mu_sigma"), sigma0=sigma0)
    elif kind in ("OrnsteinUhlenbeck", "CIR"):
        if "mu_sigma" in table:
            raise ConfigError(f"vol_model.mu_sigma: not a {kind} parameter")
        cls = OrnsteinUhlenbeck if kind == "OrnsteinUhlenbeck" else CIR
        proc = cls(
            kappa=_number(data, "vol_model", "kappa"),
            theta_bar=_number(data, "vol_model", "theta_bar"),
            alpha=_number(data, "vol_model", "alpha"),
            sigma0=sigma0,
        )
    else:
        raise ConfigError(
            f"vol_model.kind: expected LinearDrift, OrnsteinUhlenbeck or CIR, got {kind!r}"
        )
    violation = validate(proc)
    if violation is not None:
        raise ConfigError(f"vol_model.{violation.field}: {violation.message}")
    return proc


def build_view(data: dict, proc: VolProcessSpec) -> MarketView:
    try:
        return MarketView(
            mu=_number(data, "view", "mu"),
            dt=_number(data, "view", "dt"),
            vol_process=proc,
        )
    except DomainError as exc:
        raise ConfigError(f"view.{exc}") from exc


def build_strategies(data: dict) -> tuple[Strategy, ...]:
    raw = _get(data, "simulation", "strategies", required=False,
               default=["BSM", "Mastinsek", "Star"])
    if not isinstance(raw, list) or not raw:
        raise ConfigError(
            f"simulation.strategies: expected a nonempty list of strategy names, got {raw!r}"
        )
    out = []
    for item in raw:
        if not isinstance(item, str):
            raise ConfigError(f"simulation.strategies: entries must be strings, got {item!r}")
        try:
            out.append(Strategy.parse(item))
        except DomainError as exc:
            raise ConfigError(f"simulation.strategies: {exc}") from exc
    return tuple(out)


def _grid(data: dict, section: str, stem: str, default_min: float, default_max: float,
          default_points: int) -> tuple[float, ...]:
    table = data.get(section, {})
    explicit = f"{stem}_grid"
    if explicit in table:
        raw = table[explicit]
        if not isinstance(raw, list) or not raw:
            raise ConfigError(f"{section}.{explicit}: expected a nonempty list of numbers")
        vals = []
        for v in raw:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{section}.{explicit}: expected finite numbers, got {v!r}")
            vals.append(float(v))
        return tuple(vals)
    lo = _number(data, section, f"{stem}_min", required=False, default=default_min)
    hi = _number(data, section, f"{stem}_max", required=False, default=default_max)
    pts = _integer(data, section, f"{stem}_points", required=False, default=default_points)
    if pts < 1:
        raise ConfigError(f"{section}.{stem}_points: must be >= 1, got {pts!r}")
    if hi < lo:
        raise ConfigError(f"{section}.{stem}_max: must be >= {section}.{stem}_min")
    if pts == 1:
        return (lo,)
    step = (hi - lo) / (pts - 1)
    return tuple(lo + i * step for i in range(pts))


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs, already validated."""

    option: Optional[OptionSpec]
    view: Optional[MarketView]
    sim: Optional[SimConfig]
    mu_grid: tuple[float, ...]
    mu_sigma_grid: tuple[float, ...]
    lambda1_grid: tuple[float, ...]
    lambda2_grid: tuple[float, ...]
    output_dir: str
    formats: tuple[str, ...]


_COMMAND_NEEDS = {
    "greeks": ("option",),
    "hedge": ("option", "view"),
    "analyze-variance": ("option", "view"),
    "simulate": ("option", "view", "simulation"),
    "sweep": ("option", "view", "simulation"),
}


def build_run_config(data: dict, command: str) -> RunConfig:
    check_known_keys(data)
    needs = _COMMAND_NEEDS[command]

    option = build_option(data) if "option" in needs else None
    view = None
    if "view" in needs:
        proc = build_vol_model(data)
        view = build_view(data, proc)
        if option is not None and option.vol_hat != proc.sigma0:
            raise ConfigError(
                f"vol_model.sigma0: must equal option.vol_hat (the model prices and "
                f"hedges at the vol the process starts from); got sigma0={proc.sigma0!r}, "
                f"vol_hat={option.vol_hat!r}"
            )
        if not view.dt < option.maturity:
            raise ConfigError(
                f"view.dt: must be below option.maturity, got dt={view.dt!r}, "
                f"maturity={option.maturity!r}"
            )

    sim = None
    if "simulation" in needs:
        n_paths = _integer(data, "simulation", "n_paths", required=False, default=100000)
        seed = _integer(data, "simulation", "seed", required=False, default=20260814)
        sigma_mode = _string(data, "simulation", "sigma_mode", required=False,
                             default="deterministic")
        if sigma_mode not in ("deterministic", "stochastic"):
            raise ConfigError(
                f"simulation.sigma_mode: expected deterministic or stochastic, got {sigma_mode!r}"
            )
        n_substeps = _integer(data, "simulation", "n_substeps", required=False, default=1)
        strategies = build_strategies(data)
        if command == "sweep" and not isinstance(view.vol_process, LinearDrift):
            raise ConfigError(
                f"vol_model.kind: sweep varies the vol drift directly and needs "
                f"LinearDrift, got {view.vol_process.kind}"
            )
        if n_paths < 1:
            raise ConfigError(f"simulation.n_paths: must be >= 1, got {n_paths!r}")
        if not 0 <= seed < 2 ** 64:
            raise ConfigError(f"simulation.seed: must be a 64-bit unsigned integer, got {seed!r}")
        if n_substeps < 1:
            raise ConfigError(f"simulation.n_substeps: must be >= 1, got {n_substeps!r}")
        sim = SimConfig(option=option, view=view, n_paths=n_paths, seed=seed,
                        strategies=strategies, sigma_mode=sigma_mode,
                        n_substeps=n_substeps)

    formats_raw = _get(data, "output", "formats", required=False, default=["csv"])
    if not isinstance(formats_raw, list) or not formats_raw:
        raise ConfigError(f"output.formats: expected a nonempty list, got {formats_raw!r}")
    for fmt in formats_raw:
        if fmt not in ("csv", "svg"):
            raise ConfigError(f"output.formats: expected csv or svg entries, got {fmt!r}")

    return RunConfig(
        option=option,
        view=view,
        sim=sim,
        mu_grid=_grid(data, "sweep", "mu", -0.5, 0.5, 51),
        mu_sigma_grid=_grid(data, "sweep", "mu_sigma", -0.5, 0.5, 51),
        lambda1_grid=_grid(data, "variance", "lambda1", -5.0, 5.0, 101),
        lambda2_grid=_grid(data, "variance", "lambda2", -5.0, 5.0, 101),
        output_dir=_string(data, "output", "directory", required=False, default=""),
        formats=tuple(formats_raw),
    )
