"""Optical observables derived from the probe susceptibility.

Internal math is angular and measured in units of Gamma; everything emitted
by this module uses ordinary frequency (Hz) on the offset axis. All factors
of 2 pi between the two live here.

Sign conventions: ``delta = omega_d - omega_p`` labels the offset axis, while
the dispersion ``D = dn/dnu`` is taken with respect to the probe's own
optical frequency (drive held fixed), so ``dnu = -d(delta)/(2 pi)``. With this
choice an absorption line gives D < 0 (anomalous) at its center.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .constants import C_LIGHT
from .system import LevelScheme

__all__ = [
    "GridError",
    "Spectrum",
    "GroupVelocity",
    "DispersionReport",
    "KerrFit",
    "CSV_COLUMNS",
    "DIVERGENCE_THRESHOLD",
    "to_hz",
    "from_hz",
    "index_and_absorption",
    "dispersion",
    "dispersion_from_grid",
    "group_velocity",
    "phase_shift",
    "kerr_fit",
    "peak_to_peak",
    "dispersion_report",
]

CSV_COLUMNS = ("delta_hz", "re_chi", "im_chi", "n_minus_1", "alpha_per_m", "d_per_hz")
# |n + nu D| below this is reported as a divergent group velocity (|V_g| > 100 c)
DIVERGENCE_THRESHOLD = 1e-2


class GridError(ArithmeticError):
    """Offset grid too coarse or too narrow for the requested estimate."""


def to_hz(x, scheme: LevelScheme):
    """Convert an angular frequency in Gamma units to ordinary frequency in Hz."""
    return np.asarray(x) * scheme.Gamma / (2 * np.pi)


def from_hz(f, scheme: LevelScheme):
    return np.asarray(f) * (2 * np.pi) / scheme.Gamma


def index_and_absorption(chi, scheme: LevelScheme):
    """Refractive index n = 1 + Re(chi)/2 and intensity absorption (omega0/c) Im(chi) in 1/m."""
    chi = np.asarray(chi)
    if np.any(np.abs(chi) > 1e-2):
        warnings.warn("|chi| > 1e-2: optically thin approximation questionable", RuntimeWarning)
    n = 1 + chi.real / 2
    alpha = scheme.omega0 / C_LIGHT * chi.imag
    return n, alpha


def dispersion(dchi_ddelta, scheme: LevelScheme):
    """D = dn/dnu in 1/Hz from the exact offset derivative (Gamma units)."""
    # dn/dnu_p = 2 pi dn/domega_p = -2 pi * Re(dchi/ddelta)/2, with ddelta in rad/s
    return -np.pi * np.real(dchi_ddelta) / scheme.Gamma


def dispersion_from_grid(delta_hz, n, rtol: float = 0.01) -> np.ndarray:
    """Central-difference D = dn/dnu on an offset grid in Hz.

    The estimate is compared with one taken on the grid thinned by two; if the
    two disagree by more than ``rtol`` of max |D| a `GridError` is raised.
    """
    delta_hz = np.asarray(delta_hz, dtype=float)
    n = np.asarray(n, dtype=float)
    if delta_hz.size < 5:
        raise GridError("need at least five grid points for a checked derivative")
    D = -np.gradient(n, delta_hz)
    coarse = -np.gradient(n[::2], delta_hz[::2])
    scale = np.max(np.abs(D))
    if scale > 0:
        err = np.max(np.abs(coarse[1:-1] - D[::2][1:-1]))
        if err > rtol * scale:
            raise GridError(
                f"derivative estimates disagree by {err / scale:.2%} of max |D|; refine the grid"
            )
    return D


@dataclass(frozen=True)
class GroupVelocity:
    """Group velocity c/(n + nu D); ``value`` is +-inf when ``divergent``."""

    value: float
    denominator: float
    divergent: bool

    @property
    def in_units_of_c(self) -> float:
        return self.value / C_LIGHT


def group_velocity(n: float, nu: float, D: float, threshold: float = DIVERGENCE_THRESHOLD) -> GroupVelocity:
    if not nu > 0:
        raise ValueError("optical frequency must be positive")
    den = n + nu * D
    if abs(den) < threshold:
        return GroupVelocity(math.copysign(math.inf, den), den, True)
    return GroupVelocity(C_LIGHT / den, den, False)


def phase_shift(n, length: float, omega: float):
    """Heterodyne phase l (n - 1) omega / c in radians."""
    if not length > 0:
        raise ValueError("cell length must be positive")
    return length * (np.asarray(n) - 1) * omega / C_LIGHT


@dataclass(frozen=True)
class KerrFit:
    """Straight-line fit n = n1 + n2 I_d at a fixed offset (I_d in W/m^2).

    ``relative_residual`` is the residual norm divided by the norm of the
    intensity-dependent part n - n1 of the data.
    """

    n1: float
    n2: float
    residual: float
    relative_residual: float
    delta_eval: float
    n_points: int

    @property
    def n2_cm2_per_W(self) -> float:
        return self.n2 * 1e4


def kerr_fit(
    samples: Sequence[tuple[float, float]],
    delta_eval: float = float("nan"),
    excess: bool = False,
) -> KerrFit:
    """Least-squares line through ``(I_d, n)`` samples.

    With ``excess=True`` the second column holds n - 1, which keeps the
    digits of very small index changes.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or len(arr) < 3:
        raise ValueError("Kerr fit needs at least three (intensity, n) samples")
    I, y = arr[:, 0], arr[:, 1]
    if not excess:
        y = y - 1
    if len(np.unique(I)) != len(I):
        raise ValueError("Kerr fit needs distinct intensities")
    A = np.column_stack([np.ones_like(I), I])
    (c0, n2), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (c0 + n2 * I)
    res = float(np.linalg.norm(resid))
    var = float(np.linalg.norm(n2 * I))
    rel = res / var if var > 0 else (0.0 if res == 0 else math.inf)
    return KerrFit(1 + c0, float(n2), res, rel, delta_eval, len(I))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Probe spectrum on an offset grid.

    ``delta_hz`` is delta = omega_d - omega_p as ordinary frequency; ``D`` is
    dn/dnu in 1/Hz.
    """

    delta_hz: np.ndarray
    chi: np.ndarray
    n_minus_1: np.ndarray
    alpha: np.ndarray
    D: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.delta_hz.size > 1 and not np.all(np.diff(self.delta_hz) > 0):
            raise ValueError("spectrum offsets must be strictly increasing")

    def __len__(self) -> int:
        return self.delta_hz.size

    @property
    def n(self) -> np.ndarray:
        return 1 + self.n_minus_1

    @classmethod
    def from_chi(cls, delta, chi, dchi, scheme: LevelScheme, metadata=None) -> "Spectrum":
        """Build from Gamma-unit offsets, susceptibilities and exact derivatives."""
        chi = np.asarray(chi, dtype=complex)
        _, alpha = index_and_absorption(chi, scheme)
        return cls(
            np.atleast_1d(to_hz(delta, scheme)).astype(float),
            np.atleast_1d(chi),
            np.atleast_1d(chi.real / 2),
            np.atleast_1d(alpha),
            np.atleast_1d(dispersion(np.asarray(dchi), scheme)),
            dict(metadata or {}),
        )

    def rows(self):
        for k in range(len(self)):
            yield (
                self.delta_hz[k],
                self.chi[k].real,
                self.chi[k].imag,
                self.n_minus_1[k],
                self.alpha[k],
                self.D[k],
            )

    def to_csv(self, path) -> Path:
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for row in self.rows():
                w.writerow([f"{float(v):.17g}" for v in row])
        return path

    @classmethod
    def from_csv(cls, path) -> "Spectrum":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != CSV_COLUMNS:
                raise ValueError(f"{path}: expected header {','.join(CSV_COLUMNS)}")
            data = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
        data = data.reshape(-1, len(CSV_COLUMNS))
        chi = data[:, 1] + 1j * data[:, 2]
        return cls(data[:, 0], chi, data[:, 3], data[:, 4], data[:, 5], {"source": str(path)})

    def at_zero(self, column: str = "D") -> float:
        """Value of a column at delta = 0 (linear interpolation if 0 is not a grid point)."""
        y = getattr(self, column)
        if len(self) == 1:
            if self.delta_hz[0] != 0:
                raise GridError("single-point spectrum is not at delta = 0")
            return float(np.real(y[0]))
        if not self.delta_hz[0] <= 0 <= self.delta_hz[-1]:
            raise GridError("delta = 0 outside the spectrum grid")
        return float(np.interp(0.0, self.delta_hz, np.real(y)))


def _refine(x, y, k):
    """Parabolic refinement of a discrete extremum at interior index k."""
    x0, x1, x2 = x[k - 1 : k + 2]
    y0, y1, y2 = y[k - 1 : k + 2]
    den = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / den
    if a == 0:
        return x1, y1
    xv = -b / (2 * a)
    yv = y1 + a * (xv - x1) ** 2 + (2 * a * x1 + b) * (xv - x1)
    return xv, yv


def peak_to_peak(spectrum: Spectrum, refine: bool = True):
    """Index swing max(n) - min(n) and the offsets (Hz) of the minimum and maximum.

    Raises `GridError` if either extremum sits on the grid boundary.
    """
    x, y = spectrum.delta_hz, spectrum.n_minus_1
    if np.ptp(y) == 0:
        return 0.0, (0.0, 0.0)
    kmax, kmin = int(np.argmax(y)), int(np.argmin(y))
    for k in (kmax, kmin):
        if k == 0 or k == len(y) - 1:
            raise GridError("index extremum at the grid boundary; widen the offset grid")
    if refine:
        xmax, ymax = _refine(x, y, kmax)
        xmin, ymin = _refine(x, y, kmin)
    else:
        xmax, ymax, xmin, ymin = x[kmax], y[kmax], x[kmin], y[kmin]
    return float(ymax - ymin), (float(xmin), float(xmax))


@dataclass(frozen=True)
class DispersionReport:
    D0: float
    Vg: GroupVelocity
    delta_n_pp: float
    extrema_offsets: tuple[float, float]
    phase_shift: float
    cell_length: float


def dispersion_report(spectrum: Spectrum, scheme: LevelScheme, cell_length: float = 0.05) -> DispersionReport:
    """Scalar summary of a spectrum; ``phase_shift`` is the peak-to-peak heterodyne phase swing."""
    D0 = spectrum.at_zero("D")
    n0 = 1 + spectrum.at_zero("n_minus_1")
    nu0 = scheme.omega0 / (2 * np.pi)
    dn, offsets = peak_to_peak(spectrum)
    return DispersionReport(
        D0,
        group_velocity(n0, nu0, D0),
        dn,
        offsets,
        float(phase_shift(1 + dn, cell_length, scheme.omega0)),
        cell_length,
    )
