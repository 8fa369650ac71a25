"""Atomic level scheme, optical fields and the drive-frame Liouvillian.

All rates and frequencies handled here are dimensionless, measured in units
of the spontaneous decay rate Gamma. Conversion to SI lives in
:mod:`coherent_dispersion.optics`.

Basis ordering: ground sublevels by ascending m, then excited sublevels by
ascending m. Density matrices are vectorized column-major, so
``vec(rho)[i + d*j] == rho[i, j]`` and ``vec(A @ X @ B) == kron(B.T, A) @ vec(X)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .angular import AngularMomentum, DipoleCouplingSet, dipole_couplings
from .constants import C_LIGHT, RB87_D2_GAMMA, RB87_D2_WAVELENGTH

__all__ = [
    "LevelScheme",
    "DriveField",
    "ProbeField",
    "Liouvillian",
    "PI_POLARIZATION",
    "ORTHOGONAL_LINEAR",
    "linear_polarization",
    "vec",
    "unvec",
    "build_generator",
    "probe_coupling_operator",
    "lowering_operators",
    "dump_generator_csv",
]

# Spherical components are ordered (q=-1, q=0, q=+1).
PI_POLARIZATION = np.array([0.0, 1.0, 0.0], dtype=complex)
# x-polarized light with the quantization axis along z; e_x = (e_-1 - e_+1)/sqrt(2)
ORTHOGONAL_LINEAR = np.array([1.0, 0.0, -1.0], dtype=complex) / np.sqrt(2)


def linear_polarization(theta: float, phi: float = 0.0) -> np.ndarray:
    """Spherical components of a real linear polarization at polar angle ``theta``.

    ``theta = 0`` is along the quantization axis (pure pi light);
    ``theta = pi/2, phi = 0`` reproduces :data:`ORTHOGONAL_LINEAR`.
    """
    s = np.sin(theta)
    return np.array(
        [s * np.exp(-1j * phi) / np.sqrt(2), np.cos(theta), -s * np.exp(1j * phi) / np.sqrt(2)]
    )


def _unit_polarization(p) -> np.ndarray:
    p = np.asarray(p, dtype=complex).reshape(-1)
    if p.shape != (3,):
        raise ValueError("polarization must have three spherical components")
    norm = np.linalg.norm(p)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"polarization must be unit norm, got |p|={norm:.6g}")
    return p


@dataclass(frozen=True)
class LevelScheme:
    """A closed Fg -> Fe transition.

    Parameters
    ----------
    Fg, Fe : int, float or AngularMomentum
        Ground and excited hyperfine angular momenta.
    gamma : float
        Transit relaxation rate in units of Gamma; must satisfy 0 < gamma < 1.
    Gamma : float
        Spontaneous decay rate in rad/s (sets the unit of every other rate).
    wavelength : float
        Transition wavelength in meters.
    """

    Fg: AngularMomentum
    Fe: AngularMomentum
    gamma: float = 1e-3
    Gamma: float = RB87_D2_GAMMA
    wavelength: float = RB87_D2_WAVELENGTH

    def __post_init__(self):
        object.__setattr__(self, "Fg", AngularMomentum.of(self.Fg))
        object.__setattr__(self, "Fe", AngularMomentum.of(self.Fe))
        if not self.Gamma > 0:
            raise ValueError("Gamma must be positive")
        if not 0 < self.gamma < 1:
            raise ValueError(f"transit rate must satisfy 0 < gamma/Gamma < 1, got {self.gamma}")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        dipole_couplings(self.Fg, self.Fe)  # rejects forbidden pairs

    @property
    def n_ground(self) -> int:
        return self.Fg.multiplicity

    @property
    def n_excited(self) -> int:
        return self.Fe.multiplicity

    @property
    def dim(self) -> int:
        return self.n_ground + self.n_excited

    @property
    def couplings(self) -> DipoleCouplingSet:
        return dipole_couplings(self.Fg, self.Fe)

    @property
    def omega0(self) -> float:
        """Transition angular frequency in rad/s."""
        return 2 * np.pi * C_LIGHT / self.wavelength

    def labels(self) -> list[str]:
        g = [f"g{m:+g}" for m in self.Fg.projections()]
        e = [f"e{m:+g}" for m in self.Fe.projections()]
        return g + e

    def isotropic_ground(self) -> np.ndarray:
        """Equilibrium state: equal population in every ground sublevel."""
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        idx = np.arange(self.n_ground)
        rho[idx, idx] = 1.0 / self.n_ground
        return rho

    def raising(self, polarization) -> np.ndarray:
        """Full d x d operator sum_q eps_q d_q mapping ground onto excited states."""
        op = np.zeros((self.dim, self.dim), dtype=complex)
        op[self.n_ground :, : self.n_ground] = self.couplings.contract(polarization)
        return op


@dataclass(frozen=True)
class DriveField:
    """Strong drive, Rabi frequency and detuning in units of Gamma.

    ``detuning`` is omega_d - omega_0. The saturation parameter is
    ``S = 2 * rabi**2`` (i.e. 2 Omega^2 / Gamma^2).
    """

    rabi: float
    detuning: float = 0.0
    polarization: np.ndarray = field(default_factory=lambda: PI_POLARIZATION.copy())

    def __post_init__(self):
        if not self.rabi >= 0:
            raise ValueError("drive Rabi frequency must be non-negative")
        object.__setattr__(self, "polarization", _unit_polarization(self.polarization))

    @classmethod
    def from_saturation(cls, S: float, detuning: float = 0.0, polarization=None) -> "DriveField":
        if S < 0:
            raise ValueError("saturation parameter must be non-negative")
        pol = PI_POLARIZATION if polarization is None else polarization
        return cls(np.sqrt(S / 2.0), detuning, pol)

    @property
    def saturation(self) -> float:
        return 2.0 * self.rabi**2


@dataclass(frozen=True)
class ProbeField:
    """Weak probe; ``offset`` is delta = omega_d - omega_p in units of Gamma."""

    rabi: float = 1e-6
    offset: float = 0.0
    polarization: np.ndarray = field(default_factory=lambda: ORTHOGONAL_LINEAR.copy())

    def __post_init__(self):
        if not self.rabi >= 0:
            raise ValueError("probe Rabi frequency must be non-negative")
        object.__setattr__(self, "polarization", _unit_polarization(self.polarization))

    def at(self, offset: float) -> "ProbeField":
        return ProbeField(self.rabi, offset, self.polarization)


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int | None = None) -> np.ndarray:
    if d is None:
        d = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape((d, d), order="F")


def lowering_operators(scheme: LevelScheme) -> np.ndarray:
    """Jump operators C_q = sum d_q[me, mg] |g mg><e me|, stacked over q (shape (3, d, d))."""
    ng, d = scheme.n_ground, scheme.dim
    ops = np.zeros((3, d, d), dtype=complex)
    ops[:, :ng, ng:] = np.transpose(scheme.couplings.matrices, (0, 2, 1))
    return ops


def drive_hamiltonian(scheme: LevelScheme, drive: DriveField) -> np.ndarray:
    """H = -Delta P_e - (Omega/2)(D + D^dagger) in the frame rotating at omega_d."""
    H = -0.5 * drive.rabi * scheme.raising(drive.polarization)
    H = H + H.conj().T
    ne = np.arange(scheme.n_ground, scheme.dim)
    H[ne, ne] -= drive.detuning
    return H


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Vectorized master-equation generator, d^2 x d^2, in units of Gamma."""

    generator: np.ndarray
    scheme: LevelScheme
    drive: DriveField
    ordering: str = "column-major vec; ground m ascending, then excited m ascending"

    def __post_init__(self):
        self.generator.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.scheme.dim

    @cached_property
    def norm(self) -> float:
        return float(np.linalg.norm(self.generator, 1))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.generator @ vec(rho), self.dim)

    def labels(self) -> list[tuple[str, str]]:
        lab = self.scheme.labels()
        return [(lab[i], lab[j]) for j in range(self.dim) for i in range(self.dim)]


def build_generator(scheme: LevelScheme, drive: DriveField) -> Liouvillian:
    """Assemble the drive-frame Liouvillian for ``scheme`` under ``drive``.

    Terms: coherent evolution under :func:`drive_hamiltonian`, spontaneous
    emission at rate 1 (Gamma) through the three polarization channels, and
    transit relaxation ``-gamma (rho - rho_eq Tr rho)`` with ``rho_eq`` the
    isotropic ground state.
    """
    if not scheme.gamma > 0:
        raise ValueError("transit rate must be positive for a unique steady state")
    d = scheme.dim
    eye = np.eye(d)
    H = drive_hamiltonian(scheme, drive)
    L = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for C in lowering_operators(scheme):
        CdC = C.conj().T @ C
        L += np.kron(C.conj(), C) - 0.5 * np.kron(eye, CdC) - 0.5 * np.kron(CdC.T, eye)
    L -= scheme.gamma * np.eye(d * d)
    L += scheme.gamma * np.outer(vec(scheme.isotropic_ground()), vec(eye))
    return Liouvillian(L, scheme, drive)


def probe_coupling_operator(scheme: LevelScheme, probe: ProbeField) -> np.ndarray:
    """Raising part V_+ = -(Omega_p/2) sum_q eps_q d_q of the probe interaction.

    It multiplies exp(+i delta t) in the drive frame; the full Hermitian
    interaction is ``V_+ exp(i delta t) + V_+^dagger exp(-i delta t)``.
    """
    return -0.5 * probe.rabi * scheme.raising(probe.polarization)


def dump_generator_csv(L: Liouvillian, path) -> None:
    """Write the nonzero generator entries as ``row,col,re,im``."""
    G = L.generator
    rows, cols = np.nonzero(G)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for r, c in zip(rows, cols):
            w.writerow([int(r), int(c), f"{G[r, c].real:.17g}", f"{G[r, c].imag:.17g}"])
