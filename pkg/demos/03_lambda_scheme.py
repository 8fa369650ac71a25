"""
The ideal Lambda scheme as a guide
==================================

Closed-form index of a three-level Lambda system, every frequency in units
of Gamma. The center dispersion grows like Omega^2, peaks at
Omega^2 = Gamma gamma / 2 (S = gamma/Gamma) and then decays like 1/Omega^2.
"""

import numpy as np
from scipy.optimize import minimize_scalar

from coherent_dispersion.lambda_analytic import (
    LambdaParams,
    center_dispersion,
    extrema_offsets,
    optimal_rabi_squared,
    peak_index_change,
)

for gamma in (1e-2, 1e-3, 1e-4):
    base = LambdaParams(0.0, gamma=gamma)
    closed = optimal_rabi_squared(base)
    # brute force: golden-section search on log(Omega^2)
    res = minimize_scalar(
        lambda x: -center_dispersion(base.with_rabi_squared(np.exp(x))),
        bracket=(np.log(gamma) - 3, np.log(gamma), np.log(gamma) + 3),
        method="golden",
    )
    print(f"gamma = {gamma:g}: closed form {closed:.4e}, golden section {np.exp(res.x):.4e}")

# %%
# Scaling laws, as log-log slopes of D(0) against Omega^2.
p = LambdaParams(0.0, gamma=1e-3)
for label, lo, hi in (("low", 1e-4, 1e-2), ("high", 1e2, 1e4)):
    w2 = np.logspace(np.log10(lo), np.log10(hi), 21) * p.gamma
    D = [center_dispersion(p.with_rabi_squared(x)) for x in w2]
    print(f"{label}-intensity slope: {np.polyfit(np.log(w2), np.log(D), 1)[0]:.4f}")

# %%
# The index swing keeps growing with Omega^2 and saturates; the extrema move apart.
for w2 in (1e-5, 5e-4, 1e-2):
    q = p.with_rabi_squared(w2)
    print(f"Omega^2 = {w2:.0e}: extrema at +-{extrema_offsets(q)[1]:.3g} Gamma, max |n-1| = {peak_index_change(q):.3e}")
