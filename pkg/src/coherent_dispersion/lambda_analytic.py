"""Closed-form refractive index of an ideal Lambda scheme.

    n(delta) = 1 + (3 / 8 pi^2) lambda^3 N  Omega^2 delta
                   / [ (Omega^2 + Gamma gamma / 2)^2 + (gamma delta / 2)^2 ]

Every frequency (Omega, gamma, delta) is measured in units of Gamma, which
is what makes the printed expression dimensionally meaningful. The absolute
scale is therefore not an SI prediction; the shape and scaling laws are.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "LambdaParams",
    "prefactor",
    "n_lambda",
    "center_dispersion",
    "optimal_rabi_squared",
    "optimal_saturation",
    "extrema_offsets",
    "peak_index_change",
]


@dataclass(frozen=True)
class LambdaParams:
    rabi: float
    gamma: float = 1e-3
    wavelength: float = 780.241209686e-9
    N: float = 1e16

    def __post_init__(self):
        if not 0 < self.gamma < 1:
            raise ValueError("gamma/Gamma must lie in (0, 1)")
        if self.rabi < 0:
            raise ValueError("Rabi frequency must be non-negative")

    @classmethod
    def from_rabi_squared(cls, omega2: float, **kw) -> "LambdaParams":
        return cls(float(np.sqrt(omega2)), **kw)

    def with_rabi_squared(self, omega2: float) -> "LambdaParams":
        return replace(self, rabi=float(np.sqrt(omega2)))


def prefactor(p: LambdaParams) -> float:
    return 3 * p.wavelength**3 * p.N / (8 * np.pi**2)


def n_lambda(p: LambdaParams, delta):
    delta = np.asarray(delta, dtype=float)
    w2 = p.rabi**2
    den = (w2 + p.gamma / 2) ** 2 + (p.gamma * delta / 2) ** 2
    return 1 + prefactor(p) * w2 * delta / den


def center_dispersion(p: LambdaParams) -> float:
    """dn/d(delta) at delta = 0, per unit Gamma."""
    w2 = p.rabi**2
    return prefactor(p) * w2 / (w2 + p.gamma / 2) ** 2


def optimal_rabi_squared(p: LambdaParams, verify: bool = True) -> float:
    """Omega^2 maximizing the center dispersion: Gamma gamma / 2.

    With ``verify`` the closed form is checked against neighbouring values
    of Omega^2.
    """
    w2 = p.gamma / 2
    if verify:
        best = center_dispersion(p.with_rabi_squared(w2))
        for s in (1 - 1e-3, 1 + 1e-3):
            if center_dispersion(p.with_rabi_squared(w2 * s)) > best:
                raise ArithmeticError("closed-form optimum is not a maximum")
    return w2


def optimal_saturation(p: LambdaParams) -> float:
    """Saturation parameter 2 Omega^2/Gamma^2 at the optimum (equals gamma/Gamma)."""
    return 2 * optimal_rabi_squared(p)


def extrema_offsets(p: LambdaParams) -> tuple[float, float]:
    """Offsets of the index minimum and maximum, +-2 (Omega^2 + gamma/2) / gamma."""
    x = 2 * (p.rabi**2 + p.gamma / 2) / p.gamma
    return -x, x


def peak_index_change(p: LambdaParams) -> float:
    """max |n - 1|, reached at :func:`extrema_offsets`."""
    w2 = p.rabi**2
    return prefactor(p) * w2 / (p.gamma * (w2 + p.gamma / 2))
