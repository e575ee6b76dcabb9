"""
Checking a plain leapfrog against the exact propagator
======================================================

The exact spectral solution works as an oracle.  Halving the step of a
second-order scheme should cut the error by four.
"""

import numpy as np

import kgembed as kg
from kgembed.verification import oracle_errors

grid = kg.make_grid(1, [256], [20 * np.pi])
sym = kg.build_symbol(grid, kg.PhysicalParams())
state = kg.build_initial_state(kg.InitialConditionSpec(), grid, sym)

dts = [0.016, 0.008, 0.004, 0.002, 0.001]
errors = oracle_errors(state, dts, 5.0, sym)
print("   dt      L2 error     ratio")
for i, (dt, err) in enumerate(zip(dts, errors)):
    ratio = "" if i == 0 else f"{errors[i - 1] / err:8.3f}"
    print(f"{dt:6.3f}  {err:.4e}  {ratio}")

# Above the stability limit the scheme refuses to run.
limit = kg.evolution.leapfrog_stability_limit(sym)
print(f"\nstability limit dt < {limit:.4f}")
try:
    kg.run(state, kg.IntegratorConfig("leapfrog_kg", 1.1 * limit, 1.0, 1), sym)
except kg.ConfigurationError as exc:
    print("rejected:", exc)
