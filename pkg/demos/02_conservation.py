"""
Two conserved positive norms
============================

A standing Gaussian mixes forward and backward parts equally.  We evolve
it with the exact spectral propagator and with RK4 and watch N+ and N-.
"""

import numpy as np

import kgembed as kg

params = kg.PhysicalParams()
grid = kg.make_grid(1, [256], [20 * np.pi])
sym = kg.build_symbol(grid, params)
spec = kg.InitialConditionSpec(kind="gaussian", branch="standing", width=2.0, mean_wavenumber=(0.5,))
state = kg.build_initial_state(spec, grid, sym)

for scheme in ("exact", "rk4_coupled"):
    records = []
    cfg = kg.IntegratorConfig(scheme, dt=0.01, t_final=20.0, sample_stride=200)
    kg.run(state, cfg, sym, sink=records.append)
    print(f"\n{scheme}")
    print("     t        N+            N-          rho identity defect")
    for r in records:
        print(f"{r.t:6.2f}  {r.norm_plus:.12f}  {r.norm_minus:.12f}  {r.identity_defect:.2e}")
