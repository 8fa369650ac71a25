"""
Refractive index spectra near two-photon resonance
===================================================

Probe index n(delta) for both transitions at the same drive (S = 0.5).
The offset delta = omega_d - omega_p is swept over +-300 kHz, a few
transit widths. Results go to CSV with a JSON sidecar so they can be
plotted with any tool.
"""

from pathlib import Path

import numpy as np

from coherent_dispersion.optics import dispersion_report, from_hz
from coherent_dispersion.sweeps import SweepPlan, spectrum_scan, write_spectrum

out = Path("out")
out.mkdir(exist_ok=True)

for name in ("Fg2-Fe3", "Fg1-Fe0"):
    plan = SweepPlan.preset(name, gamma=1e-3, saturation=0.5)
    plan = plan.replace(deltas=from_hz(np.linspace(-300e3, 300e3, 601), plan.scheme))
    spectrum = spectrum_scan(plan)
    csv, _ = write_spectrum(spectrum, out / f"index_{name}.csv")
    rep = dispersion_report(spectrum, plan.scheme, cell_length=0.05)
    print(f"{name}: wrote {csv}")
    print(f"  D(0) = {rep.D0:.3e} 1/Hz, peak-to-peak n = {rep.delta_n_pp:.3e}")
    lo, hi = rep.extrema_offsets
    print(f"  index minimum at {lo / 1e3:+.1f} kHz, maximum at {hi / 1e3:+.1f} kHz")

# %%
# The EIA spectrum has the larger swing: F=2 -> F'=3 is the stronger transition.
# Absolute numbers scale with the density N = 1e16 m^-3, which is a free input here.
