"""Spectral simulation of the Klein-Gordon equation through its embedding
into a coupled first-order system with conserved positive norms."""

from .diagnostics import (
    DiagnosticsRecord,
    conserved_norms,
    cross_term_reality_check,
    energy_expectation,
    historical_rho,
    record_from_state,
    rho_integral,
    verify_rho_identity,
)
from .embedding import (
    consistency_check,
    dchi_dt_of,
    diagonalize,
    dpsi_dt_of,
    embed,
    from_components,
    recompose,
)
from .errors import (
    ConfigurationError,
    GridMismatchError,
    InvertibilityError,
    NonFiniteFieldError,
    NumericalBlowupError,
    SnapshotError,
)
from .evolution import IntegratorConfig, Scheme, run, step_exact, step_leapfrog, step_rk4
from .grid import (
    ComplexField,
    CoupledState,
    DiagonalState,
    GridSpec,
    PhysicalParams,
    Representation,
    inner,
    integrate_density,
    make_grid,
    norm_squared,
)
from .initial import (
    Branch,
    InitialConditionSpec,
    build_initial_state,
    make_gaussian,
    make_plane_wave,
    make_pure_state,
)
from .operators import (
    OperatorSymbol,
    apply_D,
    apply_D_inv,
    apply_Dstar,
    apply_H,
    apply_H_inv,
    apply_Pi,
    build_symbol,
)

__all__ = [
    "DiagnosticsRecord",
    "conserved_norms",
    "cross_term_reality_check",
    "energy_expectation",
    "historical_rho",
    "record_from_state",
    "rho_integral",
    "verify_rho_identity",
    "consistency_check",
    "dchi_dt_of",
    "diagonalize",
    "dpsi_dt_of",
    "embed",
    "from_components",
    "recompose",
    "ConfigurationError",
    "GridMismatchError",
    "InvertibilityError",
    "NonFiniteFieldError",
    "NumericalBlowupError",
    "SnapshotError",
    "IntegratorConfig",
    "Scheme",
    "run",
    "step_exact",
    "step_leapfrog",
    "step_rk4",
    "ComplexField",
    "CoupledState",
    "DiagonalState",
    "GridSpec",
    "PhysicalParams",
    "Representation",
    "inner",
    "integrate_density",
    "make_grid",
    "norm_squared",
    "Branch",
    "InitialConditionSpec",
    "build_initial_state",
    "make_gaussian",
    "make_plane_wave",
    "make_pure_state",
    "OperatorSymbol",
    "apply_D",
    "apply_D_inv",
    "apply_Dstar",
    "apply_H",
    "apply_H_inv",
    "apply_Pi",
    "build_symbol",
]

__version__ = "0.1.0"
