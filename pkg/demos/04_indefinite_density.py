"""
The historical density has no fixed sign
========================================

rho = 2 Im(conj(psi) dpsi/dt) integrates to a negative number for a
purely forward packet and a positive one for a purely backward packet.
Its integral always equals -(E+ - E-) / (2 hbar).
"""

import numpy as np

import kgembed as kg

grid = kg.make_grid(1, [256], [20 * np.pi])
sym = kg.build_symbol(grid, kg.PhysicalParams())

for kind in ("pure_plus", "pure_minus"):
    spec = kg.InitialConditionSpec(kind=kind, width=2.0, mean_wavenumber=(0.5,))
    state = kg.build_initial_state(spec, grid, sym)
    rec = kg.record_from_state(state, sym)
    print(f"{kind:10s}  int rho = {rec.rho_integral:+.6f}   "
          f"-(E+ - E-)/2 = {-(rec.energy_plus - rec.energy_minus) / 2:+.6f}   "
          f"N+ = {rec.norm_plus:.3f}  N- = {rec.norm_minus:.3f}")

# A standing packet has equal weights, so the integral is zero.
state = kg.build_initial_state(kg.InitialConditionSpec(branch="standing"), grid, sym)
print("standing    int rho =", f"{kg.record_from_state(state, sym).rho_integral:+.2e}")
