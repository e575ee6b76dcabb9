"""From Klein-Gordon initial data to the coupled first-order system and back.

Given ``psi`` and its time derivative, the auxiliary field is
``chi = -D^-1 (hbar dpsi/dt) = i H^-1 (hbar dpsi/dt)``.  The pair then obeys

    i hbar dpsi/dt = H chi,    i hbar dchi/dt = H psi,

and ``eta_pm = psi +- chi`` decouple into ``i hbar d(eta_pm)/dt = +-H eta_pm``.
"""

from __future__ import annotations

import numpy as np

from .errors import GridMismatchError, InvertibilityError
from .grid import ComplexField, CoupledState, DiagonalState, PhysicalParams, norm_squared
from .operators import OperatorSymbol, apply_D, apply_D_inv, apply_H

__all__ = [
    "embed",
    "from_components",
    "dpsi_dt_of",
    "dchi_dt_of",
    "diagonalize",
    "recompose",
    "consistency_check",
]

_DEFECT_FLOOR = 1e-300


def embed(
    psi0: ComplexField,
    dpsi_dt0: ComplexField,
    sym: OperatorSymbol,
    params: PhysicalParams | None = None,
    t: float = 0.0,
) -> CoupledState:
    """Build ``(psi, chi)`` from ``psi`` and ``dpsi/dt`` at time ``t``."""
    params = params or sym.params
    if not params.mass > 0:
        raise InvertibilityError("D is not invertible for mass <= 0", key="mass")
    if psi0.grid != dpsi_dt0.grid:
        raise GridMismatchError("psi0 and dpsi_dt0 live on different grids")
    chi = -apply_D_inv(params.hbar * dpsi_dt0, sym)
    return CoupledState(psi0, chi.as_representation(psi0.representation), t)


def from_components(
    eta_plus: ComplexField, eta_minus: ComplexField, t: float = 0.0
) -> CoupledState:
    """Coupled state with prescribed forward/backward components."""
    return recompose(DiagonalState(eta_plus, eta_minus, t))


def dpsi_dt_of(state: CoupledState, sym: OperatorSymbol, params: PhysicalParams | None = None):
    """``dpsi/dt = -(i/hbar) H chi``."""
    hbar = (params or sym.params).hbar
    return apply_H(state.chi, sym) * (-1j / hbar)


def dchi_dt_of(state: CoupledState, sym: OperatorSymbol, params: PhysicalParams | None = None):
    """``dchi/dt = -(i/hbar) H psi``."""
    hbar = (params or sym.params).hbar
    return apply_H(state.psi, sym) * (-1j / hbar)


def diagonalize(state: CoupledState) -> DiagonalState:
    return DiagonalState(state.psi + state.chi, state.psi - state.chi, state.t)


def recompose(d: DiagonalState) -> CoupledState:
    return CoupledState(
        (d.eta_plus + d.eta_minus) * 0.5, (d.eta_plus - d.eta_minus) * 0.5, d.t
    )


def consistency_check(
    state: CoupledState, dpsi_dt: ComplexField, sym: OperatorSymbol, params=None
) -> float:
    """Relative defect of ``hbar dpsi/dt = -D chi``.

    Zero (to rounding) for any state produced by :func:`embed` with the same
    ``dpsi_dt``; close to one when ``chi`` carries no information about it.
    """
    hbar = (params or sym.params).hbar
    lhs = hbar * dpsi_dt
    defect = lhs + apply_D(state.chi, sym)
    denom = max(_l2(lhs), _DEFECT_FLOOR)
    return _l2(defect) / denom


def _l2(f: ComplexField) -> float:
    return float(np.sqrt(norm_squared(f)))
