"""
Checking the linear-response solver by brute force
==================================================

The frequency-domain susceptibility solves one linear system per offset.
Here the same number comes from integrating the master equation with
both fields switched on, for a couple of points. A large transit rate
(gamma = 0.1 Gamma) keeps the settling time short; the algebra being
tested does not depend on gamma.

Susceptibilities are printed per unit density (N = 1 m^-3). Each point
takes a few seconds.
"""

from coherent_dispersion.system import LevelScheme
from coherent_dispersion.validation import compare_point

g = 0.1
for Fg, Fe in ((1, 0), (2, 3)):
    scheme = LevelScheme(Fg, Fe, gamma=g)
    for delta in (0.0, 0.3 * g):
        c = compare_point(scheme, 0.5, delta)
        print(
            f"Fg={Fg} Fe={Fe} delta={delta:.2f} Gamma: "
            f"frequency domain {c.chi_floquet:.6e}, time domain {c.chi_time:.6e}, rel err {c.rel_error:.1e}"
        )
