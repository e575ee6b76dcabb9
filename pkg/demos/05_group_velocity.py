"""
Packets move at the relativistic group velocity
===============================================

A wide forward packet with mean wavenumber k0 should drift at
c^2 hbar k0 / E(k0).  We track its centroid and fit a line.
"""

import numpy as np

import kgembed as kg
from kgembed.diagnostics import centroid, fit_velocity

params = kg.PhysicalParams()
grid = kg.make_grid(1, [512], [200.0])
sym = kg.build_symbol(grid, params)
k0 = 1.0
spec = kg.InitialConditionSpec(width=7.5, mean_wavenumber=(k0,), center=(50.0,))
state = kg.build_initial_state(spec, grid, sym)

times, positions = [], []
for t in np.linspace(0.0, 40.0, 21):
    s = kg.run(state, kg.IntegratorConfig("exact", t if t > 0 else 1.0, t, 1), sym)
    times.append(t)
    positions.append(centroid(s.psi))

v = fit_velocity(np.array(times), np.array(positions), grid.lengths)[0]
expected = k0 / np.sqrt(1 + k0**2)
print(f"fitted v = {v:.5f}   expected {expected:.5f}   relative error {abs(v - expected) / expected:.2e}")
