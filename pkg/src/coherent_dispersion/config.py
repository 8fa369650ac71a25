"""JSON run configuration with explicit units on every physical quantity.

Physical values are strings ``"<number> <unit>"``. Frequencies are ordinary
frequencies (the decay rate is given as Gamma/2pi, e.g. ``"6.0666 MHz"``).
Recognised units:

=============  ==========================================
frequency      Hz, kHz, MHz, GHz, THz
intensity      W/m^2, W/cm^2, mW/cm^2, uW/cm^2
length         m, cm, mm, um, nm
density        m^-3, cm^-3
dispersion     1/Hz, s
=============  ==========================================

Minimal example (everything else takes the documented defaults)::

    {"scheme": {"preset": "Fg2-Fe3"}, "drive": {"saturation": 0.5}}

Defaults: transit rate gamma/Gamma = 1e-3, Rb-87 D2 decay rate and
wavelength, drive on resonance, drive linearly polarized along the
quantization axis, probe linearly polarized orthogonal to it, density
1e16 m^-3, cell length 5 cm, offset grid -300..300 kHz (601 points),
saturation grid 1e-4..1e3 (30 points, log), delta_eval 16 kHz, one worker.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import RB87_D2_GAMMA, RB87_D2_WAVELENGTH
from .optics import from_hz
from .sweeps import PRESETS, SweepPlan, intensity_to_rabi, rabi_to_intensity
from .system import ORTHOGONAL_LINEAR, PI_POLARIZATION, LevelScheme

__all__ = ["ConfigError", "RunConfig", "UNITS", "parse_quantity", "format_quantity", "load_config", "resolve_config"]

UNITS = {
    "frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12},
    "intensity": {"W/m^2": 1.0, "W/cm^2": 1e4, "mW/cm^2": 10.0, "uW/cm^2": 1e-2},
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "density": {"m^-3": 1.0, "cm^-3": 1e6},
    "dispersion": {"1/Hz": 1.0, "s": 1.0},
}

_QTY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S+)\s*$")

COMMANDS = ("spectrum", "saturation", "kerr")

DEFAULTS = {
    "scheme": {"gamma_ratio": 1e-3, "Gamma": "6.0666 MHz", "wavelength": "780.241209686 nm"},
    "drive": {"detuning": "0 Hz", "polarization": "parallel"},
    "probe": {"polarization": "orthogonal"},
    "medium": {"density": "1e16 m^-3", "cell_length": "5 cm"},
    "grid": {
        "delta": {"start": "-300 kHz", "stop": "300 kHz", "num": 601},
        "saturation": {"start": 1e-4, "stop": 1e3, "num": 30, "scale": "log"},
    },
    "delta_eval": "16 kHz",
    "output": ".",
    "workers": 1,
}

_ALLOWED = {
    "": {"command", "scheme", "drive", "probe", "medium", "grid", "delta_eval", "output", "workers"},
    "scheme": {"preset", "Fg", "Fe", "gamma_ratio", "Gamma", "wavelength"},
    "drive": {"saturation", "intensity", "rabi", "detuning", "polarization"},
    "probe": {"polarization"},
    "medium": {"density", "cell_length"},
    "grid": {"delta", "saturation", "intensity"},
}

POLARIZATIONS = {"parallel": PI_POLARIZATION, "orthogonal": ORTHOGONAL_LINEAR}


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending field path."""


def parse_quantity(value, kind: str, field: str) -> float:
    """Parse ``"<number> <unit>"`` into SI (Hz for frequencies)."""
    if isinstance(value, bool) or not isinstance(value, str):
        raise ConfigError(f"{field}: expected a quantity with {kind} units, got {value!r}")
    m = _QTY.match(value)
    if not m:
        raise ConfigError(f"{field}: cannot parse {value!r} as '<number> <unit>'")
    number, unit = m.groups()
    table = UNITS[kind]
    if unit not in table:
        raise ConfigError(f"{field}: unknown {kind} unit {unit!r} (allowed: {', '.join(table)})")
    return float(number) * table[unit]


def format_quantity(x: float, unit: str) -> str:
    for table in UNITS.values():
        if unit in table:
            return f"{x / table[unit]:.17g} {unit}"
    raise KeyError(unit)


def _number(value, field, integer=False, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{field}: expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{field}: expected an integer, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{field}: must be positive")
    return int(value) if integer else float(value)


def _check_keys(section: dict, path: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{path or '<root>'}: expected an object")
    extra = set(section) - _ALLOWED[path]
    if extra:
        raise ConfigError(f"{path + '.' if path else ''}{sorted(extra)[0]}: unknown field")


def _merge(defaults: dict, given: dict) -> dict:
    out = copy.deepcopy(defaults)
    for k, v in given.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "grid":
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


@dataclass(frozen=True, eq=False)
class RunConfig:
    """Validated run description. ``resolved`` is the full config after defaults (minus workers)."""

    command: str | None
    plan: SweepPlan
    cell_length: float
    delta_eval: float  # Gamma units
    output: Path
    workers: int
    resolved: dict


def _grid(spec, kind, field, scheme=None):
    if not isinstance(spec, dict):
        raise ConfigError(f"{field}: expected an object with start/stop/num")
    for key in ("start", "stop", "num"):
        if key not in spec:
            raise ConfigError(f"{field}.{key}: missing required field")
    extra = set(spec) - {"start", "stop", "num", "scale"}
    if extra:
        raise ConfigError(f"{field}.{sorted(extra)[0]}: unknown field")
    num = _number(spec["num"], f"{field}.num", integer=True, positive=True)
    scale = spec.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise ConfigError(f"{field}.scale: must be 'linear' or 'log'")
    if kind is None:
        a = _number(spec["start"], f"{field}.start")
        b = _number(spec["stop"], f"{field}.stop")
    else:
        a = parse_quantity(spec["start"], kind, f"{field}.start")
        b = parse_quantity(spec["stop"], kind, f"{field}.stop")
    if num > 1 and not b > a:
        raise ConfigError(f"{field}: stop must exceed start")
    if scale == "log":
        if a <= 0:
            raise ConfigError(f"{field}.start: log grid needs a positive start")
        return np.logspace(np.log10(a), np.log10(b), num)
    return np.linspace(a, b, num)


def resolve_config(raw: dict, command: str | None = None) -> RunConfig:
    """Validate a parsed config and turn it into a `RunConfig`."""
    _check_keys(raw, "")
    for sec in ("scheme", "drive", "probe", "medium", "grid"):
        if sec in raw:
            _check_keys(raw[sec], sec)
    if "scheme" not in raw:
        raise ConfigError("scheme: missing required field")
    file_cmd = raw.get("command")
    if file_cmd is not None and file_cmd not in COMMANDS:
        raise ConfigError(f"command: unknown command {file_cmd!r}")
    if command and file_cmd and command != file_cmd:
        raise ConfigError(f"command: config is for {file_cmd!r}, not {command!r}")
    cfg = _merge(DEFAULTS, raw)
    if "grid" in raw:
        # each grid is all-or-nothing: a partial grid is an error, not a blend with the default
        cfg["grid"] = {**copy.deepcopy(DEFAULTS["grid"]), **copy.deepcopy(raw["grid"])}
    cmd = command or file_cmd

    sc = cfg["scheme"]
    if "preset" in sc:
        if "Fg" in sc or "Fe" in sc:
            raise ConfigError("scheme.preset: give either a preset or Fg/Fe, not both")
        if sc["preset"] not in PRESETS:
            raise ConfigError(f"scheme.preset: unknown preset {sc['preset']!r} ({', '.join(PRESETS)})")
        Fg, Fe = PRESETS[sc["preset"]]
    else:
        for k in ("Fg", "Fe"):
            if k not in sc:
                raise ConfigError(f"scheme.{k}: missing required field")
        Fg = _number(sc["Fg"], "scheme.Fg")
        Fe = _number(sc["Fe"], "scheme.Fe")
    Gamma = 2 * np.pi * parse_quantity(sc["Gamma"], "frequency", "scheme.Gamma")
    wavelength = parse_quantity(sc["wavelength"], "length", "scheme.wavelength")
    gamma = _number(sc["gamma_ratio"], "scheme.gamma_ratio")
    try:
        scheme = LevelScheme(Fg, Fe, gamma=gamma, Gamma=Gamma, wavelength=wavelength)
    except ValueError as exc:
        raise ConfigError(f"scheme: {exc}") from None

    dr = cfg["drive"]
    given = [k for k in ("saturation", "intensity", "rabi") if k in dr]
    if len(given) > 1:
        raise ConfigError(f"drive.{given[1]}: give only one of saturation, intensity, rabi")
    if cmd == "spectrum" and not given:
        raise ConfigError("drive.saturation: missing required field (or drive.intensity / drive.rabi)")
    S = 0.0
    if "saturation" in dr:
        S = _number(dr["saturation"], "drive.saturation")
    elif "intensity" in dr:
        I = parse_quantity(dr["intensity"], "intensity", "drive.intensity")
        S = float(2 * intensity_to_rabi(I, scheme) ** 2)
    elif "rabi" in dr:
        rabi = 2 * np.pi * parse_quantity(dr["rabi"], "frequency", "drive.rabi") / Gamma
        S = float(2 * rabi**2)
    if S < 0:
        raise ConfigError("drive.saturation: must be non-negative")
    detuning = float(from_hz(parse_quantity(dr["detuning"], "frequency", "drive.detuning"), scheme))
    try:
        dpol = POLARIZATIONS[dr["polarization"]]
    except (KeyError, TypeError):
        raise ConfigError(f"drive.polarization: must be one of {sorted(POLARIZATIONS)}") from None
    try:
        ppol = POLARIZATIONS[cfg["probe"]["polarization"]]
    except (KeyError, TypeError):
        raise ConfigError(f"probe.polarization: must be one of {sorted(POLARIZATIONS)}") from None

    md = cfg["medium"]
    N = parse_quantity(md["density"], "density", "medium.density")
    if not N > 0:
        raise ConfigError("medium.density: must be positive")
    cell = parse_quantity(md["cell_length"], "length", "medium.cell_length")
    if not cell > 0:
        raise ConfigError("medium.cell_length: must be positive")

    grid = cfg["grid"]
    deltas = from_hz(_grid(grid["delta"], "frequency", "grid.delta"), scheme)
    sats = _grid(grid["saturation"], None, "grid.saturation")
    if "intensity" in grid:
        intens = _grid(grid["intensity"], "intensity", "grid.intensity")
    else:
        # default: eight points up to Omega^2 = 0.01 Gamma gamma (linear Kerr regime)
        top = float(rabi_to_intensity(np.sqrt(0.01 * gamma), scheme))
        intens = np.linspace(0.0, top, 8)
        cfg["grid"]["intensity"] = {"start": "0 W/m^2", "stop": format_quantity(top, "W/m^2"), "num": 8}
    delta_eval = float(from_hz(parse_quantity(cfg["delta_eval"], "frequency", "delta_eval"), scheme))
    workers = _number(cfg["workers"], "workers", integer=True, positive=True)
    if not isinstance(cfg["output"], str):
        raise ConfigError("output: expected a directory path string")

    try:
        plan = SweepPlan(
            scheme,
            saturation=S,
            detuning=detuning,
            N=N,
            deltas=deltas,
            saturations=sats,
            intensities=intens,
            drive_polarization=dpol,
            probe_polarization=ppol,
            workers=workers,
        )
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None
    resolved = {k: v for k, v in cfg.items() if k != "workers"}
    resolved["command"] = cmd
    resolved["drive"] = dict(resolved["drive"], resolved_saturation=S)
    return RunConfig(cmd, plan, cell, delta_eval, Path(cfg["output"]), workers, resolved)


def load_config(path, command: str | None = None) -> RunConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return resolve_config(raw, command)
