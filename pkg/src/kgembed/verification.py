"""Invariant checks shared by ``kgembed check`` and the acceptance tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .embedding import diagonalize, embed
from .evolution import IntegratorConfig, Scheme, run
from .grid import ComplexField, CoupledState, norm_squared
from .operators import OperatorSymbol, apply_Pi

__all__ = [
    "CheckResult",
    "norm_drift",
    "evolve_records",
    "psi_l2_error",
    "oracle_errors",
    "rk4_drifts",
    "projector_defects",
    "random_field",
    "format_table",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: str
    passed: bool


def norm_drift(records) -> tuple[float, float]:
    """Drift of each conserved norm relative to the total initial norm.

    Scaling by ``N+(0) + N-(0)`` keeps the measure meaningful when one
    component is zero up to rounding.
    """
    plus = np.array([r.norm_plus for r in records])
    minus = np.array([r.norm_minus for r in records])
    total = plus[0] + minus[0]
    return (
        float(np.max(np.abs(plus - plus[0])) / total),
        float(np.max(np.abs(minus - minus[0])) / total),
    )


def evolve_records(state: CoupledState, scheme, dt, t_final, sym, sample_stride=1):
    records = []
    cfg = IntegratorConfig(scheme, dt, t_final, sample_stride)
    final = run(state, cfg, sym, sink=records.append)
    return final, records


def psi_l2_error(a: ComplexField, b: ComplexField) -> float:
    return math.sqrt(norm_squared(a - b))


def oracle_errors(state: CoupledState, dts, t_final, sym: OperatorSymbol) -> list[float]:
    """L2 distance at the final step between leapfrog and exact ``psi`` for each ``dt``."""
    errors = []
    for dt in dts:
        lf = run(state, IntegratorConfig(Scheme.LEAPFROG_KG, dt, t_final, 10**9), sym)
        # Compare at the time actually reached; it can differ from t_final by up to dt/2.
        elapsed = lf.t - state.t
        reference = run(state, IntegratorConfig(Scheme.EXACT, elapsed, elapsed, 1), sym) if elapsed > 0 else state
        errors.append(psi_l2_error(lf.psi, reference.psi))
    return errors


def rk4_drifts(state: CoupledState, dts, t_final, sym: OperatorSymbol) -> list[float]:
    """Worst conserved-norm drift of an RK4 run, one value per ``dt``."""
    out = []
    for dt in dts:
        _, records = evolve_records(state, Scheme.RK4_COUPLED, dt, t_final, sym,
                                    sample_stride=max(1, int(round(0.1 / dt))))
        out.append(max(norm_drift(records)))
    return out


def random_field(grid, rng: np.random.Generator) -> ComplexField:
    return ComplexField(grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape))


def projector_defects(grid, sym: OperatorSymbol, samples: int, rng: np.random.Generator):
    """Worst elementwise mismatch between the two routes to ``eta_pm``, and of ``Pi+ f + Pi- f = 2f``."""
    route_defect = 0.0
    sum_defect = 0.0
    for _ in range(samples):
        f = random_field(grid, rng)
        dfdt = random_field(grid, rng)
        d = diagonalize(embed(f, dfdt, sym))
        plus = apply_Pi(f, dfdt, "+", sym)
        minus = apply_Pi(f, dfdt, "-", sym)
        scale = np.max(np.abs(f.values))
        route_defect = max(
            route_defect,
            np.max(np.abs(d.eta_plus.values - plus.values)) / scale,
            np.max(np.abs(d.eta_minus.values - minus.values)) / scale,
        )
        sum_defect = max(sum_defect, np.max(np.abs(plus.values + minus.values - 2 * f.values)) / scale)
    return float(route_defect), float(sum_defect)


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  {'value':>12}  {'threshold':<22} result"]
    for r in results:
        lines.append(
            f"{r.name:<{width}}  {r.value:>12.4e}  {r.threshold:<22} {'PASS' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)
