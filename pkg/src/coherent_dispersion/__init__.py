"""Dispersion of coherently driven degenerate two-level transitions.

Steady-state optical Bloch equations for a closed Fg -> Fe transition with
Zeeman degeneracy, weak-probe susceptibility, and the derived refractive
index, dispersion, group velocity and Kerr coefficient.
"""

__version__ = "0.1.0"

from .angular import AngularMomentum, DipoleCouplingSet, clebsch_gordan, dipole_couplings
from .system import (
    ORTHOGONAL_LINEAR,
    PI_POLARIZATION,
    DriveField,
    LevelScheme,
    Liouvillian,
    ProbeField,
    build_generator,
    probe_coupling_operator,
)
from .steady_state import DensityMatrix, SteadyStateError, solve_steady_state
from .probe_response import ProbeResponse, SusceptibilityPoint, calibrate_prefactor, linear_response
from .optics import (
    DispersionReport,
    GroupVelocity,
    KerrFit,
    Spectrum,
    dispersion,
    dispersion_report,
    group_velocity,
    index_and_absorption,
    kerr_fit,
    peak_to_peak,
    phase_shift,
)
from .sweeps import SweepPlan, intensity_scan, intensity_to_rabi, saturation_scan, spectrum_scan
