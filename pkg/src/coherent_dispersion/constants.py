"""Physical constants and reference data used throughout the package."""

from scipy.constants import c as C_LIGHT
from scipy.constants import epsilon_0 as EPSILON_0
from scipy.constants import h as PLANCK
from scipy.constants import hbar as HBAR
import numpy as np

# 87Rb D2 line (standard reference data, not fitted)
RB87_D2_WAVELENGTH = 780.241209686e-9  # m
RB87_D2_GAMMA = 2 * np.pi * 6.0666e6  # rad/s

__all__ = ["C_LIGHT", "EPSILON_0", "HBAR", "PLANCK", "RB87_D2_WAVELENGTH", "RB87_D2_GAMMA"]
