"""Weak-probe linear response around the drive-dressed steady state.

In the drive frame the probe adds ``V_+ exp(i delta t) + h.c.`` with
``delta = omega_d - omega_p``. Writing
``rho(t) = rho0 + rho_+ exp(i delta t) + rho_- exp(-i delta t)``, the
first-order sideband solves

    (L - i delta) vec(rho_+) = i vec([V_+, rho0])

and the co-polarized optical coherence ``Tr(D_p^dagger rho_+)`` is the
probe-frequency polarization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .steady_state import DensityMatrix, solve_steady_state, trace_constrained
from .system import (
    DriveField,
    Liouvillian,
    LevelScheme,
    ProbeField,
    build_generator,
    probe_coupling_operator,
    vec,
)

__all__ = [
    "SusceptibilityPoint",
    "ResolventError",
    "ProbeResponse",
    "linear_response",
    "calibrate_prefactor",
    "chi_prefactor",
    "CHI_WARN",
    "RESPONSE_NORMALIZATION",
]

CHI_WARN = 1e-2
# Two-level resonance with unit dipole gives Tr(D^dagger rho_+)/Omega_p = i (Gamma units);
# C = 2 makes the intensity absorption coefficient N * 3 lambda^2 / (2 pi) there.
RESPONSE_NORMALIZATION = 2.0


class ResolventError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SusceptibilityPoint:
    """Probe susceptibility at one offset.

    ``delta`` is in units of Gamma; ``dchi_ddelta`` is the derivative with
    respect to that dimensionless offset (divide by Gamma for per rad/s).
    """

    delta: float
    chi: complex
    dchi_ddelta: complex


def chi_prefactor(scheme: LevelScheme, N: float) -> float:
    """K = 3 lambda^3 N C / (8 pi^2) multiplying Tr(D_p^dagger rho_+)/Omega_p in Gamma units."""
    return 3 * scheme.wavelength**3 * N / (8 * np.pi**2) * RESPONSE_NORMALIZATION


class ProbeResponse:
    """Reusable linear-response solver for one (Liouvillian, steady state, probe polarization).

    The source term and detection vector are built once; each offset costs one
    LU factorization of the shifted generator, shared with the exact
    derivative solve.
    """

    def __init__(
        self,
        L: Liouvillian,
        rho0: DensityMatrix,
        polarization,
        N: float = 1.0,
        prefactor: float | None = None,
    ):
        self.L = L
        self.rho0 = rho0
        self.N = N
        scheme = L.scheme
        unit_probe = ProbeField(1.0, 0.0, polarization)
        Vp = probe_coupling_operator(scheme, unit_probe)  # per unit Omega_p
        r0 = rho0.matrix
        self._source = 1j * vec(Vp @ r0 - r0 @ Vp)
        self._source[0] = 0.0  # trace row: rho_+ is traceless
        self._detect = vec(scheme.raising(unit_probe.polarization)).conj()
        self._A0 = trace_constrained(L.generator, L.dim)
        self._shift = np.ones(L.dim**2)
        self._shift[0] = 0.0
        self._K = chi_prefactor(scheme, N) if prefactor is None else prefactor

    def raw(self, delta: float) -> tuple[complex, complex]:
        """Tr(D_p^dagger rho_+)/Omega_p and its delta-derivative, Gamma units."""
        A = self._A0 - 1j * delta * np.diag(self._shift)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
                lu = scipy.linalg.lu_factor(A, check_finite=False)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
            raise ResolventError(f"singular resolvent at delta={delta}") from exc
        piv = np.abs(np.diag(lu[0]))
        if piv.min() < 1e-14 * piv.max():
            raise ResolventError(f"singular resolvent at delta={delta}")
        x = scipy.linalg.lu_solve(lu, self._source, check_finite=False)
        xd = scipy.linalg.lu_solve(lu, 1j * self._shift * x, check_finite=False)
        return complex(self._detect @ x), complex(self._detect @ xd)

    def __call__(self, delta: float) -> SusceptibilityPoint:
        r, dr = self.raw(delta)
        chi = self._K * r
        if abs(chi) > CHI_WARN:
            warnings.warn(
                f"|chi|={abs(chi):.3g} outside the optically thin regime", RuntimeWarning, stacklevel=2
            )
        return SusceptibilityPoint(float(delta), chi, self._K * dr)


def linear_response(
    L: Liouvillian,
    rho0: DensityMatrix,
    scheme: LevelScheme,
    probe: ProbeField,
    N: float,
) -> SusceptibilityPoint:
    """Complex probe susceptibility and its exact offset derivative.

    ``probe.rabi`` only has to be positive; the result is the first-order
    (Omega_p -> 0) susceptibility and does not depend on it.
    """
    if scheme != L.scheme:
        raise ValueError("scheme does not match the Liouvillian")
    return ProbeResponse(L, rho0, probe.polarization, N)(probe.offset)


@lru_cache(maxsize=1)
def calibrate_prefactor() -> float:
    """Numerical estimate of `RESPONSE_NORMALIZATION`.

    Extracted from the Fg=0 -> Fe=1 weak-field resonance at two small
    transit rates, extrapolated linearly to gamma -> 0. Used as a
    consistency check of the closed-form constant.
    """
    # alpha = (2 pi / lambda) * Im chi and chi = 3 lambda^3 N C/(8 pi^2) * r, so C = 2 / Im r
    values = []
    gammas = (1e-6, 2e-6)
    for g in gammas:
        L = build_generator(LevelScheme(0, 1, gamma=g), DriveField(0.0))
        resp = ProbeResponse(L, solve_steady_state(L), [0, 1, 0], prefactor=1.0)
        r, _ = resp.raw(0.0)
        values.append(2.0 / r.imag)
    (c1, c2), (g1, g2) = values, gammas
    return float(c1 - (c2 - c1) / (g2 - g1) * g1)
