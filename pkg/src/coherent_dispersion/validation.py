"""Oracle comparisons: frequency-domain susceptibility versus direct time integration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .probe_response import ProbeResponse
from .steady_state import solve_steady_state
from .system import ORTHOGONAL_LINEAR, DriveField, LevelScheme, ProbeField, build_generator
from .timedomain import IntegrationConfig, chi_by_integration

__all__ = ["OracleComparison", "compare_point", "oracle_grid", "run_oracle_suite", "ORACLE_RTOL"]

ORACLE_RTOL = 1e-6


@dataclass(frozen=True)
class OracleComparison:
    Fg: float
    Fe: float
    S: float
    delta: float  # Gamma units
    chi_floquet: complex
    chi_time: complex

    @property
    def rel_error(self) -> float:
        return abs(self.chi_time - self.chi_floquet) / abs(self.chi_floquet)

    def passed(self, rtol: float = ORACLE_RTOL) -> bool:
        return self.rel_error <= rtol


def compare_point(
    scheme: LevelScheme,
    S: float,
    delta: float,
    probe_rabi: float = 1e-5,
    polarization=ORTHOGONAL_LINEAR,
    config: IntegrationConfig | None = None,
) -> OracleComparison:
    drive = DriveField.from_saturation(S)
    L = build_generator(scheme, drive)
    chi_f = ProbeResponse(L, solve_steady_state(L), polarization, 1.0)(delta).chi
    probe = ProbeField(probe_rabi, delta, polarization)
    chi_t = chi_by_integration(scheme, drive, probe, 1.0, config)
    return OracleComparison(float(scheme.Fg), float(scheme.Fe), S, delta, chi_f, complex(chi_t))


def oracle_grid(gamma: float, quick: bool = False):
    """(S, delta) points: S in {0.5, 0.05} and delta in {0, +-0.3 gamma, +-3 gamma}."""
    deltas = [0.0, 0.3 * gamma, -0.3 * gamma, 3 * gamma, -3 * gamma]
    if quick:
        return [(0.5, 0.0), (0.5, 0.3 * gamma)]
    return [(S, d) for S in (0.5, 0.05) for d in deltas]


def run_oracle_suite(
    transitions=((2, 3), (1, 0)),
    gamma: float = 0.1,
    quick: bool = False,
    progress=None,
) -> list[OracleComparison]:
    """Compare both methods on `oracle_grid` for each transition.

    A large transit rate keeps the settling time ``20/gamma`` short; the
    comparison tests the algebra, which does not depend on gamma.
    """
    out = []
    for Fg, Fe in transitions:
        scheme = LevelScheme(Fg, Fe, gamma=gamma)
        for S, d in oracle_grid(gamma, quick):
            c = compare_point(scheme, S, d)
            out.append(c)
            if progress is not None:
                progress(c)
    return out
