"""Run configuration: flat key-value config files with flag overrides.

The config format is deliberately plain text, one `key = value` per line,
`#` starts a comment.  Flags always win over file values.  Numbers are
parsed as floats, `true/false` as booleans; `dims` is comma separated;
a sweep axis reads `name:min:max:count:lin|log` (keys `sweep`, `sweep2`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import OptogravError
from .mean_field import Regime
from .params import SystemParams


class ConfigError(OptogravError, ValueError):
    """Malformed configuration (maps to exit code 2)."""


PARAM_KEYS = ("omega_b", "kappa", "lambda", "gamma_a", "gamma_b", "mass", "g",
              "eta", "chi", "upsilon", "theta_tilt", "force_F")
RUN_KEYS = ("regime", "dims", "out", "format", "oracle", "jobs", "seed",
            "sweep", "sweep2", "preset",
            "kappa_min", "kappa_max", "kappa_count",
            "gamma_a_min", "gamma_a_max", "gamma_a_count",
            "chi_fracs", "tolerance")

REGIME_NAMES = {r.value: r for r in Regime}
# short aliases for the command line
REGIME_NAMES.update({
    "nr_single": Regime.NONRECIPROCAL_SINGLE,
    "r_single": Regime.RECIPROCAL_SINGLE,
    "nr_two_photon": Regime.NONRECIPROCAL_TWO_PHOTON,
    "r_two_photon": Regime.RECIPROCAL_TWO_PHOTON,
    "nr_mpa": Regime.NONRECIPROCAL_MPA,
    "r_mpa": Regime.RECIPROCAL_MPA,
})


@dataclass(frozen=True)
class SweepAxis:
    name: str
    lo: float
    hi: float
    count: int
    spacing: str  # "lin" | "log"

    def values(self) -> np.ndarray:
        if self.count < 1:
            raise ConfigError("sweep count must be >= 1")
        if self.spacing == "lin":
            return np.linspace(self.lo, self.hi, self.count)
        if self.spacing == "log":
            if self.lo <= 0 or self.hi <= 0:
                raise ConfigError("log spacing needs positive bounds")
            return np.geomspace(self.lo, self.hi, self.count)
        raise ConfigError(f"unknown spacing {self.spacing!r}")


@dataclass
class RunConfig:
    params: SystemParams
    regime: Regime | None = None
    sweeps: list = field(default_factory=list)
    out: str | None = None
    format: str = "csv"
    oracle: bool = False
    dims: tuple = (10, 10)
    jobs: int = 1
    seed: int = 0  # reserved; all computations are deterministic
    preset: str | None = None
    extra: dict = field(default_factory=dict)


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("out", "format", "regime", "sweep", "sweep2", "preset", "chi_fracs"):
        return raw
    if key == "oracle":
        if raw.lower() in ("true", "1", "yes", "on"):
            return True
        if raw.lower() in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"boolean expected for {key}, got {raw!r}")
    if key == "dims":
        return tuple(int(s) for s in raw.split(","))
    if key in ("jobs", "seed", "kappa_count", "gamma_a_count"):
        return int(raw)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {key} = {raw!r}") from exc


def parse_config_file(path: str) -> dict:
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, raw = (s.strip() for s in stripped.split("=", 1))
        if key not in PARAM_KEYS and key not in RUN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, raw)
    return values


def _parse_sweep(raw: str) -> SweepAxis:
    parts = raw.split(":")
    if len(parts) != 5:
        raise ConfigError(f"sweep must be name:min:max:count:lin|log, got {raw!r}")
    name, lo, hi, count, spacing = parts
    if name not in PARAM_KEYS:
        raise ConfigError(f"sweep axis {name!r} is not a parameter")
    return SweepAxis(name=name, lo=float(lo), hi=float(hi), count=int(count),
                     spacing=spacing)


def parse_regime(raw: str) -> Regime:
    key = raw.strip().lower().replace("_", "-")
    if key in REGIME_NAMES:
        return REGIME_NAMES[key]
    key_us = raw.strip().lower()
    if key_us in REGIME_NAMES:
        return REGIME_NAMES[key_us]
    raise ConfigError(f"unknown regime {raw!r}; known: {sorted(REGIME_NAMES)}")


def build_run_config(values: dict) -> RunConfig:
    """Assemble a RunConfig from merged file/flag values.

    Parameter defaults: omega_b=20, kappa=0.05, gamma_a=gamma_b=1, g=1,
    mass=2*omega_b (so that the displacement coupling equals g), drives off.
    When `lambda` is omitted it follows the regime (kappa for nonreciprocal,
    0 for reciprocal) and defaults to the nonreciprocal value.
    """
    regime = parse_regime(values["regime"]) if "regime" in values else None

    omega_b = float(values.get("omega_b", 20.0))
    kappa = float(values.get("kappa", 0.05))
    if "lambda" in values:
        lam = float(values["lambda"])
    elif regime is not None and not regime.nonreciprocal:
        lam = 0.0
    else:
        lam = kappa
    try:
        params = SystemParams(
            omega_b=omega_b, kappa=kappa, lam=lam,
            gamma_a=float(values.get("gamma_a", 1.0)),
            gamma_b=float(values.get("gamma_b", 1.0)),
            mass=float(values.get("mass", 2.0 * omega_b)),
            g=float(values.get("g", 1.0)),
            eta=float(values.get("eta", 0.0)),
            chi=float(values.get("chi", 0.0)),
            upsilon=float(values.get("upsilon", 0.0)),
            theta_tilt=float(values.get("theta_tilt", 0.0)),
            force_F=float(values.get("force_F", 0.0)),
        )
    except OptogravError as exc:
        raise ConfigError(str(exc)) from exc

    sweeps = []
    for key in ("sweep", "sweep2"):
        if key in values:
            sweeps.append(_parse_sweep(values[key]))

    fmt = values.get("format", "csv")
    if fmt not in ("csv", "jsonl"):
        raise ConfigError(f"format must be csv or jsonl, got {fmt!r}")
    dims = tuple(values.get("dims", (10, 10)))
    if not 2 <= len(dims) <= 3:
        raise ConfigError("dims needs two or three entries")

    extra = {k: values[k] for k in ("kappa_min", "kappa_max", "kappa_count",
                                    "gamma_a_min", "gamma_a_max",
                                    "gamma_a_count", "chi_fracs", "tolerance")
             if k in values}
    jobs = int(values.get("jobs", 1))
    if jobs < 1:
        raise ConfigError("jobs must be >= 1")
    return RunConfig(params=params, regime=regime, sweeps=sweeps,
                     out=values.get("out"), format=fmt,
                     oracle=bool(values.get("oracle", False)), dims=dims,
                     jobs=jobs, seed=int(values.get("seed", 0)),
                     preset=values.get("preset"), extra=extra)


def sweep_points(cfg: RunConfig) -> list[SystemParams]:
    """Cartesian product of up to two sweep axes, outer axis first."""
    def apply(p: SystemParams, name: str, value: float) -> SystemParams:
        if name == "lambda":
            return p.replace(lam=value)
        return p.replace(**{name: value})

    if not cfg.sweeps:
        return [cfg.params]
    points = []
    if len(cfg.sweeps) == 1:
        for v in cfg.sweeps[0].values():
            points.append(apply(cfg.params, cfg.sweeps[0].name, v))
    else:
        for v1 in cfg.sweeps[0].values():
            for v2 in cfg.sweeps[1].values():
                points.append(apply(apply(cfg.params, cfg.sweeps[0].name, v1),
                                    cfg.sweeps[1].name, v2))
    return points


def fmt17(x: float) -> str:
    """17 significant digits: enough to round-trip a double."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(x, ".17g")
