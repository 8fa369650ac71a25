"""Angular-momentum algebra for Zeeman-degenerate dipole transitions.

Clebsch-Gordan coefficients are evaluated with the Racah closed form in
exact rational arithmetic. All angular momenta are carried internally as
``twice_j`` integers so half-integer values are represented exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, isqrt, sqrt

import numpy as np

__all__ = [
    "AngularMomentum",
    "DipoleCouplingSet",
    "clebsch_gordan",
    "dipole_couplings",
    "SPHERICAL_Q",
]

# Ordering of spherical components used everywhere in the package.
SPHERICAL_Q = (-1, 0, 1)


def _twice(x) -> int:
    """Return ``2*x`` as an int, rejecting anything that is not a multiple of 1/2."""
    if isinstance(x, AngularMomentum):
        return x.twice_j
    t = Fraction(x) * 2
    if t.denominator != 1:
        raise ValueError(f"{x!r} is not an integer or half-integer")
    return int(t)


@dataclass(frozen=True)
class AngularMomentum:
    """An angular momentum quantum number stored as ``2j``."""

    twice_j: int

    def __post_init__(self):
        if not isinstance(self.twice_j, (int, np.integer)) or self.twice_j < 0:
            raise ValueError(f"twice_j must be a non-negative integer, got {self.twice_j!r}")
        object.__setattr__(self, "twice_j", int(self.twice_j))

    @classmethod
    def of(cls, j) -> "AngularMomentum":
        if isinstance(j, cls):
            return j
        return cls(_twice(j))

    @property
    def j(self) -> float:
        return self.twice_j / 2

    @property
    def multiplicity(self) -> int:
        return self.twice_j + 1

    def projections(self) -> np.ndarray:
        """Allowed m values in ascending order."""
        return np.arange(-self.twice_j, self.twice_j + 1, 2) / 2

    def __float__(self) -> float:
        return self.j

    def __str__(self) -> str:
        if self.twice_j % 2:
            return f"{self.twice_j}/2"
        return str(self.twice_j // 2)


def _check_projection(tj: int, tm: int, name: str) -> None:
    if abs(tm) > tj or (tj - tm) % 2:
        raise ValueError(f"invalid projection {name}: m={tm / 2} for j={tj / 2}")


@lru_cache(maxsize=None)
def _cg_squared_signed(tj1, tm1, tj2, tm2, tJ, tM) -> tuple[int, Fraction]:
    """Racah formula on twice-valued arguments: returns (sign, coefficient**2)."""
    if tm1 + tm2 != tM:
        return 1, Fraction(0)
    # all of these are even integers by the triangle/projection checks
    a = (tj1 + tj2 - tJ) // 2
    b = (tj1 - tj2 + tJ) // 2
    c = (-tj1 + tj2 + tJ) // 2
    pref = Fraction(
        (tJ + 1) * factorial(a) * factorial(b) * factorial(c),
        factorial((tj1 + tj2 + tJ) // 2 + 1),
    )
    pref *= (
        factorial((tJ + tM) // 2)
        * factorial((tJ - tM) // 2)
        * factorial((tj1 - tm1) // 2)
        * factorial((tj1 + tm1) // 2)
        * factorial((tj2 - tm2) // 2)
        * factorial((tj2 + tm2) // 2)
    )
    kmin = max(0, (tj2 - tJ - tm1) // 2, (tj1 - tJ + tm2) // 2)
    kmax = min(a, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = (
            factorial(k)
            * factorial(a - k)
            * factorial((tj1 - tm1) // 2 - k)
            * factorial((tj2 + tm2) // 2 - k)
            * factorial((tJ - tj2 + tm1) // 2 + k)
            * factorial((tJ - tj1 - tm2) // 2 + k)
        )
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 1, Fraction(0)
    sign = 1 if total > 0 else -1
    return sign, pref * total * total


def _sqrt_fraction(q: Fraction) -> float:
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return rn / rd
    return sqrt(n / d)


def clebsch_gordan(j1, m1, j2, m2, J, M) -> float:
    """Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> (Condon-Shortley phase).

    Arguments may be ints, floats holding half-integers, `Fraction` or
    `AngularMomentum`. Raises ``ValueError`` for an invalid projection or a
    non-triangular ``(j1, j2, J)``.
    """
    tj1, tm1, tj2, tm2, tJ, tM = (_twice(v) for v in (j1, m1, j2, m2, J, M))
    for tj in (tj1, tj2, tJ):
        if tj < 0:
            raise ValueError("angular momenta must be non-negative")
    _check_projection(tj1, tm1, "m1")
    _check_projection(tj2, tm2, "m2")
    _check_projection(tJ, tM, "M")
    if not (abs(tj1 - tj2) <= tJ <= tj1 + tj2) or (tj1 + tj2 + tJ) % 2:
        raise ValueError(f"non-triangular coupling ({tj1 / 2}, {tj2 / 2}, {tJ / 2})")
    sign, sq = _cg_squared_signed(tj1, tm1, tj2, tm2, tJ, tM)
    return sign * _sqrt_fraction(sq)


@dataclass(frozen=True)
class DipoleCouplingSet:
    """Normalized dipole coupling amplitudes between a ground and excited manifold.

    ``matrices[k]`` holds d_q for ``q = SPHERICAL_Q[k]``; rows index excited
    sublevels and columns ground sublevels, both by ascending m.
    """

    Fg: AngularMomentum
    Fe: AngularMomentum
    matrices: np.ndarray  # shape (3, 2Fe+1, 2Fg+1)

    def __getitem__(self, q: int) -> np.ndarray:
        return self.matrices[SPHERICAL_Q.index(q)]

    def decay_sums(self) -> np.ndarray:
        """Sum over q and m_g of |d_q|**2 for each excited sublevel."""
        return np.sum(np.abs(self.matrices) ** 2, axis=(0, 2))

    def contract(self, polarization) -> np.ndarray:
        """Raising operator sum_q eps_q d_q for a spherical polarization vector."""
        eps = np.asarray(polarization, dtype=complex)
        return np.tensordot(eps, self.matrices, axes=1)


@lru_cache(maxsize=64)
def _couplings(tFg: int, tFe: int) -> DipoleCouplingSet:
    Fg, Fe = AngularMomentum(tFg), AngularMomentum(tFe)
    mats = np.zeros((3, Fe.multiplicity, Fg.multiplicity))
    for k, q in enumerate(SPHERICAL_Q):
        for ig, tmg in enumerate(range(-tFg, tFg + 1, 2)):
            tme = tmg + 2 * q
            if abs(tme) > tFe:
                continue
            ie = (tme + tFe) // 2
            mats[k, ie, ig] = clebsch_gordan(
                Fraction(tFg, 2), Fraction(tmg, 2), 1, q, Fraction(tFe, 2), Fraction(tme, 2)
            )
    norms = np.sum(mats**2, axis=(0, 2))
    mats /= np.sqrt(norms)[None, :, None]
    mats.flags.writeable = False
    return DipoleCouplingSet(Fg, Fe, mats)


def dipole_couplings(Fg, Fe) -> DipoleCouplingSet:
    """Spherical dipole couplings d_q between ``Fg`` and ``Fe`` manifolds.

    Entries are Clebsch-Gordan coefficients <Fg m_g; 1 q | Fe m_e>, scaled so
    every excited sublevel has unit total decay strength. Raises
    ``ValueError`` for a dipole-forbidden pair.
    """
    tFg, tFe = _twice(Fg), _twice(Fe)
    if abs(tFg - tFe) > 2 or (tFg - tFe) % 2 or tFg + tFe < 2:
        raise ValueError(f"dipole-forbidden transition Fg={tFg / 2} -> Fe={tFe / 2}")
    return _couplings(tFg, tFe)
