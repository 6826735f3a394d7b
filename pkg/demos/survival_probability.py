"""
In-well probability by brute force
==================================

Build the unbound wavepacket mode by mode, integrate its norm over the well
and take the time moments directly.  This is slow and needs an explicit
cutoff, which is exactly why the single-quadrature route exists; here the
two are compared.
"""

import numpy as np

from barrier_lifetime import PotentialSpec, TimeGrid, lifetime, moments_time_domain
from barrier_lifetime.moments import derived_times

for v0a2 in (0.0, -1.0, -4.0):
    spec = PotentialSpec.from_v0a2(v0a2)
    grid = TimeGrid.build(spec, t_max=50.0, n_t=4096)
    tm = moments_time_domain(spec, grid)
    res = lifetime(spec)

    # a few samples of dP(t); t is in units of t0
    t = tm.t / spec.t0
    for target in (0.0, 0.1, 0.5, 2.0, 10.0):
        i = int(np.argmin(np.abs(t - target)))
        print(f"v0a2={v0a2:5.1f}  t/t0={t[i]:6.2f}  dP={tm.delta_p[i]:.6e}")

    tau = derived_times(tm.num, tm.den, spec.t0)[2]
    print(f"  tau_bar: time domain {tau:.8f}, single quadrature {res.tau_bar:.8f}")
    print(f"  relative tail beyond t_max: {tm.tail_bound:.1e}, late decay rate {tm.decay_rate:.3g}\n")

# The decay is far from exponential at early times: dP(t) drops quickly and
# then develops a slow power-law tail.  The late-time rate fitted for the tail
# bound is only a local envelope.
