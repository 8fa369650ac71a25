"""Parameter scans: offset spectra, saturation scans of D(0), intensity scans for Kerr fits.

Grid points are independent and may be farmed out to worker processes;
results are always collected in grid order, so serial and parallel runs
produce identical numbers and identical files.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .constants import C_LIGHT, HBAR
from .optics import KerrFit, Spectrum, dispersion, index_and_absorption, kerr_fit
from .probe_response import ProbeResponse
from .steady_state import solve_steady_state
from .system import (
    ORTHOGONAL_LINEAR,
    PI_POLARIZATION,
    DriveField,
    LevelScheme,
    build_generator,
)

__all__ = [
    "PRESETS",
    "SweepPlan",
    "SaturationPoint",
    "IntensitySample",
    "intensity_to_rabi",
    "rabi_to_intensity",
    "saturation_intensity",
    "INTENSITY_CONVERSION",
    "spectrum_scan",
    "saturation_scan",
    "intensity_scan",
    "write_spectrum",
    "write_saturation",
    "write_sidecar",
]

PRESETS = {
    "Fg2-Fe3": (2, 3),
    "Fg1-Fe0": (1, 0),
    "Fg0-Fe1": (0, 1),
}

INTENSITY_CONVERSION = (
    "Omega^2 = 3 lambda^3 Gamma I / (4 pi^2 hbar c), i.e. I = c eps0 E^2/2, "
    "Omega = mu E/hbar, mu^2 = 3 pi eps0 hbar c^3 Gamma / omega0^3"
)


def intensity_to_rabi(intensity, scheme: LevelScheme):
    """Drive Rabi frequency in units of Gamma for an intensity in W/m^2."""
    I = np.asarray(intensity, dtype=float)
    if np.any(I < 0):
        raise ValueError("intensity must be non-negative")
    omega2 = 3 * scheme.wavelength**3 * scheme.Gamma * I / (4 * np.pi**2 * HBAR * C_LIGHT)
    return np.sqrt(omega2) / scheme.Gamma


def rabi_to_intensity(rabi, scheme: LevelScheme):
    omega2 = (np.asarray(rabi, dtype=float) * scheme.Gamma) ** 2
    return omega2 * 4 * np.pi**2 * HBAR * C_LIGHT / (3 * scheme.wavelength**3 * scheme.Gamma)


def saturation_intensity(scheme: LevelScheme) -> float:
    """Intensity (W/m^2) at which S = 2 Omega^2/Gamma^2 equals 1."""
    return float(rabi_to_intensity(np.sqrt(0.5), scheme))


def _strictly_monotone(a) -> np.ndarray:
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.size == 0:
        raise ValueError("grid must be non-empty")
    if a.size > 1 and not np.all(np.diff(a) > 0):
        raise ValueError("grid must be strictly increasing")
    return a


@dataclass(frozen=True, eq=False)
class SweepPlan:
    """Everything needed to run a scan.

    Frequencies are in units of Gamma, intensities in W/m^2, density in
    atoms/m^3. Only the grid used by a given scan needs to be set.
    """

    scheme: LevelScheme
    saturation: float = 0.5
    detuning: float = 0.0
    N: float = 1e16
    deltas: np.ndarray | None = None
    saturations: np.ndarray | None = None
    intensities: np.ndarray | None = None
    drive_polarization: np.ndarray = field(default_factory=lambda: PI_POLARIZATION.copy())
    probe_polarization: np.ndarray = field(default_factory=lambda: ORTHOGONAL_LINEAR.copy())
    workers: int = 1

    def __post_init__(self):
        if self.saturation < 0:
            raise ValueError("saturation parameter must be non-negative")
        if not self.N > 0:
            raise ValueError("atomic density must be positive")
        for name in ("deltas", "saturations", "intensities"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, _strictly_monotone(v))
        if self.saturations is not None and self.saturations[0] < 0:
            raise ValueError("saturation grid must be non-negative")
        if self.intensities is not None and self.intensities[0] < 0:
            raise ValueError("intensity grid must be non-negative")

    @classmethod
    def preset(cls, name: str, gamma: float = 1e-3, **kw) -> "SweepPlan":
        try:
            Fg, Fe = PRESETS[name]
        except KeyError:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
        return cls(LevelScheme(Fg, Fe, gamma=gamma), **kw)

    def drive(self, S: float | None = None, rabi: float | None = None) -> DriveField:
        if rabi is None:
            rabi = np.sqrt((self.saturation if S is None else S) / 2)
        return DriveField(float(rabi), self.detuning, self.drive_polarization)

    def replace(self, **kw) -> "SweepPlan":
        return replace(self, **kw)

    def describe(self) -> dict:
        s = self.scheme
        out = {
            "scheme": {
                "Fg": str(s.Fg),
                "Fe": str(s.Fe),
                "Gamma_rad_per_s": s.Gamma,
                "gamma_over_Gamma": s.gamma,
                "wavelength_m": s.wavelength,
            },
            "saturation": self.saturation,
            "detuning_over_Gamma": self.detuning,
            "density_per_m3": self.N,
            "drive_polarization_spherical": _cplx(self.drive_polarization),
            "probe_polarization_spherical": _cplx(self.probe_polarization),
            "intensity_conversion": INTENSITY_CONVERSION,
            "offset_convention": "delta = omega_d - omega_p; D = dn/dnu_probe",
        }
        for name in ("deltas", "saturations", "intensities"):
            v = getattr(self, name)
            if v is not None:
                out[name] = [float(x) for x in v]
        return out


def _cplx(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _pmap(func, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, items, chunksize=chunk))


def _chunks(a, k):
    return [c for c in np.array_split(np.asarray(a), k) if c.size]


def _spectrum_chunk(args):
    plan, deltas = args
    L = build_generator(plan.scheme, plan.drive())
    resp = ProbeResponse(L, solve_steady_state(L), plan.probe_polarization, plan.N)
    out = []
    for d in deltas:
        try:
            p = resp(float(d))
        except ArithmeticError as exc:
            raise type(exc)(f"offset delta={d} Gamma: {exc}") from exc
        out.append((p.chi, p.dchi_ddelta))
    return out


def spectrum_scan(plan: SweepPlan) -> Spectrum:
    """Probe spectrum over ``plan.deltas`` at drive saturation ``plan.saturation``."""
    if plan.deltas is None:
        raise ValueError("plan has no offset grid")
    pieces = _pmap(_spectrum_chunk, [(plan, c) for c in _chunks(plan.deltas, max(plan.workers, 1))], plan.workers)
    flat = [x for piece in pieces for x in piece]
    chi = np.array([c for c, _ in flat], dtype=complex)
    dchi = np.array([d for _, d in flat], dtype=complex)
    meta = dict(plan.describe(), kind="spectrum")
    return Spectrum.from_chi(plan.deltas, chi, dchi, plan.scheme, meta)


@dataclass(frozen=True)
class SaturationPoint:
    S: float
    D0: float  # 1/Hz
    negative: bool  # solid marker in the usual plotting convention


def _saturation_point(args):
    plan, S = args
    L = build_generator(plan.scheme, plan.drive(S=S))
    try:
        resp = ProbeResponse(L, solve_steady_state(L), plan.probe_polarization, plan.N)
        p = resp(0.0)
    except ArithmeticError as exc:
        raise type(exc)(f"saturation S={S}: {exc}") from exc
    D0 = float(dispersion(p.dchi_ddelta, plan.scheme))
    return SaturationPoint(float(S), D0, D0 < 0)


def saturation_scan(plan: SweepPlan) -> list[SaturationPoint]:
    """D(0) versus drive saturation, from the exact-derivative path."""
    if plan.saturations is None:
        raise ValueError("plan has no saturation grid")
    return _pmap(_saturation_point, [(plan, float(S)) for S in plan.saturations], plan.workers)


@dataclass(frozen=True)
class IntensitySample:
    intensity: float  # W/m^2
    rabi: float  # Gamma units
    n_minus_1: float
    alpha: float


def _intensity_point(args):
    plan, I, delta = args
    rabi = float(intensity_to_rabi(I, plan.scheme))
    L = build_generator(plan.scheme, plan.drive(rabi=rabi))
    resp = ProbeResponse(L, solve_steady_state(L), plan.probe_polarization, plan.N)
    p = resp(delta)
    _, alpha = index_and_absorption(p.chi, plan.scheme)
    return IntensitySample(float(I), rabi, float(p.chi.real / 2), float(alpha))


def intensity_scan(plan: SweepPlan, delta_eval: float) -> tuple[KerrFit, list[IntensitySample]]:
    """Index at fixed offset ``delta_eval`` (Gamma units) versus drive intensity, with a Kerr fit."""
    if plan.intensities is None:
        raise ValueError("plan has no intensity grid")
    top = float(intensity_to_rabi(plan.intensities[-1], plan.scheme)) ** 2
    if top > 0.01 * plan.scheme.gamma:
        warnings.warn(
            f"Omega^2 up to {top / plan.scheme.gamma:.3g} Gamma gamma leaves the linear Kerr regime "
            "(<= 0.01 Gamma gamma); inspect the fit residual",
            RuntimeWarning,
            stacklevel=2,
        )
    samples = _pmap(
        _intensity_point, [(plan, float(I), float(delta_eval)) for I in plan.intensities], plan.workers
    )
    fit = kerr_fit([(s.intensity, s.n_minus_1) for s in samples], delta_eval, excess=True)
    return fit, samples


def write_sidecar(path, metadata: dict, config: dict | None = None) -> Path:
    """JSON sidecar with the resolved parameters; deterministic (sorted keys, no timestamps)."""
    doc = {
        "code": {"package": "coherent_dispersion", "version": __version__},
        "parameters": metadata,
        "units": {
            "delta_hz": "Hz, ordinary frequency, delta = omega_d - omega_p",
            "re_chi": "dimensionless",
            "im_chi": "dimensionless",
            "n_minus_1": "dimensionless",
            "alpha_per_m": "1/m, intensity absorption coefficient",
            "d_per_hz": "1/Hz, dn/dnu of the probe",
        },
    }
    if config is not None:
        doc["config"] = config
    path = Path(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_spectrum(spectrum: Spectrum, path, config: dict | None = None) -> tuple[Path, Path]:
    path = Path(path)
    spectrum.to_csv(path)
    side = write_sidecar(path.with_suffix(".json"), spectrum.metadata, config)
    return path, side


def write_saturation(points, plan: SweepPlan, path, config: dict | None = None) -> tuple[Path, Path]:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("saturation,d0_per_hz,negative\n")
        for p in points:
            fh.write(f"{p.S:.17g},{p.D0:.17g},{int(p.negative)}\n")
    side = write_sidecar(path.with_suffix(".json"), dict(plan.describe(), kind="saturation"), config)
    return path, side
