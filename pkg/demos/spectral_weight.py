"""
Where the initial state lives in the continuum
==============================================

The occupation density |C_k|^2 of the continuum states integrates to one
when the well binds nothing.  Once a bound state exists the missing weight
is its occupation, which is how the sweep flags it without solving for it.
"""

import numpy as np

from barrier_lifetime import PotentialSpec, completeness, completeness_deficit, energy_sum_rule, mean_energy
from barrier_lifetime.spectral import phi, spectral_weight

k = np.linspace(0.0, 12.0, 7)
spec = PotentialSpec()
print("k      |C_k|^2      phi(k)")
for kk, w, p in zip(k, spectral_weight(k, spec), phi(k, spec)):
    print(f"{kk:4.1f}  {w:.6e}  {p: .6e}")

# phi multiplies the bare sin(qx) inside the well, so it already carries the
# continuum normalisation; its square alone does not integrate to one.
total = completeness(spec).value
print(f"\nno well: int |C_k|^2 dk = {total:.9f}")
print(f"         int |C_k|^2 k^2/2 dk = {energy_sum_rule(spec).value:.6f}, <H> = {mean_energy(spec)[0]:.6f}")

# scan across the first binding threshold, tan(qa) = -qa at v0a2 ~ -2.058
for v0a2 in (-2.0, -2.05, -2.06, -2.1, -3.0, -8.0, -20.0):
    s = PotentialSpec.from_v0a2(v0a2)
    print(f"v0a2 = {v0a2:6.2f}: missing weight {completeness_deficit(s)[0]:.5f}")
