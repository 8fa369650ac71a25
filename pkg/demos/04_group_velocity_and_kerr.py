"""
Group velocity and Kerr coefficient
===================================

First the arithmetic from measured numbers: a dispersion of -6e-11 1/Hz
at 780 nm gives a negative group velocity, and D = -n/nu makes it diverge.
Then the model's index at a fixed 16 kHz offset is scanned against drive
intensity and fitted with n = n1 + n2 I.
"""

import numpy as np

from coherent_dispersion.constants import C_LIGHT
from coherent_dispersion.optics import group_velocity
from coherent_dispersion.sweeps import SweepPlan, intensity_scan, rabi_to_intensity

nu = C_LIGHT / 780.24e-9
for D in (-6e-11, -2.6e-15, 1e-12):
    vg = group_velocity(1.0, nu, D)
    text = "divergent" if vg.divergent else f"c/{1 / vg.in_units_of_c:.4g}"
    print(f"D = {D:8.1e} 1/Hz -> V_g = {text}")

# %%
# Kerr scan in the linear regime Omega^2 <= 0.01 Gamma gamma.
for name in ("Fg2-Fe3", "Fg1-Fe0"):
    plan = SweepPlan.preset(name, gamma=1e-3)
    s = plan.scheme
    top = float(rabi_to_intensity(np.sqrt(0.01 * s.gamma), s))
    plan = plan.replace(intensities=np.linspace(0, top, 8))
    fit, _ = intensity_scan(plan, 2 * np.pi * 16e3 / s.Gamma)
    print(
        f"{name}: n2 = {fit.n2_cm2_per_W:+.3e} cm^2/W over 0..{top / 10:.2e} mW/cm^2, "
        f"relative residual {fit.relative_residual:.1e}"
    )

# n2 is proportional to N (1e16 m^-3 here); the measured value implies a lower effective density.
