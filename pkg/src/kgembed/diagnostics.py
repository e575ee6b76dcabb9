"""Conserved norms, energies and the historical density rho.

For a state with components ``eta_pm`` the historical density
``rho = 2 Im(conj(psi) psi_t)`` integrates to

    int rho = -(1 / (2 hbar)) * (<eta+, H eta+> - <eta-, H eta->)

Derivation: with ``psi = (eta+ + eta-)/2`` and
``psi_t = -(i / 2hbar) H (eta+ - eta-)``,

    int conj(psi) psi_t = -(i / 4hbar) [E+ - E- + X - conj(X)],
    X = <eta-, H eta+>,

and ``X - conj(X)`` is purely imaginary, so its contribution is real and
drops out of ``Im``.  Hence ``Im int conj(psi) psi_t = -(E+ - E-) / (4 hbar)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .errors import GridMismatchError
from .embedding import consistency_check, diagonalize, dpsi_dt_of, recompose
from .grid import ComplexField, CoupledState, DiagonalState, PhysicalParams, inner, norm_squared
from .operators import OperatorSymbol, apply_H

__all__ = [
    "DiagnosticsRecord",
    "conserved_norms",
    "normalized_components",
    "historical_rho",
    "rho_integral",
    "energy_expectation",
    "verify_rho_identity",
    "cross_term_reality_check",
    "record_from_state",
    "relative_drift",
    "fit_phase_frequency",
    "centroid",
    "fit_velocity",
]

SCALE_FLOOR = 1e-30
SELF_ADJOINT_TOL = 1e-12


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    norm_plus: float
    norm_minus: float
    energy_plus: float
    energy_minus: float
    rho_integral: float
    identity_defect: float
    constraint_defect: float

    @classmethod
    def columns(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def as_dict(self) -> dict:
        return asdict(self)


def conserved_norms(d: DiagonalState) -> tuple[float, float]:
    """``(int |eta+|^2, int |eta-|^2)``; both nonnegative by construction."""
    return norm_squared(d.eta_plus), norm_squared(d.eta_minus)


def normalized_components(d: DiagonalState) -> DiagonalState:
    """Copy of ``d`` with each nonzero component scaled to unit norm."""

    def unit(f):
        n = math.sqrt(norm_squared(f))
        return f / n if n > 0 else f

    return DiagonalState(unit(d.eta_plus), unit(d.eta_minus), d.t)


def historical_rho(psi: ComplexField, dpsi_dt: ComplexField) -> np.ndarray:
    """Pointwise ``2 Im(conj(psi) dpsi_dt)`` in position space."""
    if psi.grid != dpsi_dt.grid:
        raise GridMismatchError("psi and dpsi_dt live on different grids")
    p = psi.to_position().values
    q = dpsi_dt.to_position().values
    return 2.0 * np.imag(np.conj(p) * q)


def rho_integral(psi: ComplexField, dpsi_dt: ComplexField) -> float:
    # Same quantity as integrate_density(historical_rho(...)), without the pointwise pass.
    return 2.0 * inner(psi, dpsi_dt).imag


def energy_expectation(f: ComplexField, sym: OperatorSymbol) -> float:
    """``<f, H f>``; raises if the imaginary part exceeds rounding level."""
    value = inner(f, apply_H(f, sym))
    scale = max(norm_squared(f) * sym.maximum, SCALE_FLOOR)
    if abs(value.imag) > SELF_ADJOINT_TOL * scale:
        raise ArithmeticError(
            f"<f, Hf> has imaginary part {value.imag:.3e} (scale {scale:.3e}); H is not self-adjoint here"
        )
    return value.real


def _identity_parts(d: DiagonalState, sym, params):
    hbar = params.hbar
    e_plus = energy_expectation(d.eta_plus, sym)
    e_minus = energy_expectation(d.eta_minus, sym)
    state = recompose(d)
    rho_int = rho_integral(state.psi, dpsi_dt_of(state, sym, params))
    return rho_int, e_plus, e_minus, hbar


def _identity_defect(rho_int, e_plus, e_minus, hbar):
    predicted = -(e_plus - e_minus) / (2.0 * hbar)
    scale = max(abs(rho_int), (e_plus + e_minus) / (2.0 * hbar), SCALE_FLOOR)
    return abs(rho_int - predicted) / scale


def verify_rho_identity(d: DiagonalState, sym: OperatorSymbol, params: PhysicalParams | None = None) -> float:
    """Normalized defect of ``int rho = -(E+ - E-) / (2 hbar)``."""
    params = params or sym.params
    return _identity_defect(*_identity_parts(d, sym, params))


def cross_term_reality_check(d: DiagonalState, sym: OperatorSymbol) -> float:
    """``|Re I| / scale`` for ``I = <eta-, H eta+> - <eta+, H eta->``.

    By self-adjointness ``I`` is purely imaginary.
    """
    cross = inner(d.eta_minus, apply_H(d.eta_plus, sym)) - inner(d.eta_plus, apply_H(d.eta_minus, sym))
    scale = math.sqrt(norm_squared(d.eta_plus) * norm_squared(d.eta_minus)) * sym.maximum
    return abs(cross.real) / max(scale, SCALE_FLOOR)


def record_from_state(
    state: CoupledState | DiagonalState,
    sym: OperatorSymbol,
    params: PhysicalParams | None = None,
    dpsi_dt: ComplexField | None = None,
) -> DiagnosticsRecord:
    """All diagnostics of one state.

    ``dpsi_dt`` defaults to the spectral value ``-(i/hbar) H chi``; the
    leapfrog path passes its finite-difference estimate instead.
    """
    params = params or sym.params
    if isinstance(state, DiagonalState):
        d, coupled = state, recompose(state)
    else:
        d, coupled = diagonalize(state), state
    if dpsi_dt is None:
        dpsi_dt = dpsi_dt_of(coupled, sym, params)
    n_plus, n_minus = conserved_norms(d)
    e_plus = energy_expectation(d.eta_plus, sym)
    e_minus = energy_expectation(d.eta_minus, sym)
    rho_int = rho_integral(coupled.psi, dpsi_dt)
    return DiagnosticsRecord(
        t=float(state.t),
        norm_plus=n_plus,
        norm_minus=n_minus,
        energy_plus=e_plus,
        energy_minus=e_minus,
        rho_integral=rho_int,
        identity_defect=_identity_defect(rho_int, e_plus, e_minus, params.hbar),
        constraint_defect=consistency_check(coupled, dpsi_dt, sym, params),
    )


def relative_drift(values: Sequence[float]) -> float:
    """``max |v - v[0]| / |v[0]|`` over a time series."""
    v = np.asarray(values, dtype=float)
    ref = abs(v[0])
    return float(np.max(np.abs(v - v[0])) / max(ref, SCALE_FLOOR))


def fit_phase_frequency(times, amplitudes) -> float:
    """Angular frequency ``w`` of ``a(t) ~ exp(-i w t)`` by a linear fit of the unwrapped phase."""
    phase = np.unwrap(np.angle(np.asarray(amplitudes)))
    slope = np.polyfit(np.asarray(times, dtype=float), phase, 1)[0]
    return -float(slope)


def centroid(f: ComplexField) -> np.ndarray:
    """Circular mean position of ``|f|^2`` along each axis, in ``[0, L)``."""
    density = np.abs(f.to_position().values) ** 2
    out = []
    for axis, (x, length) in enumerate(zip(f.grid.axis_coordinates, f.grid.lengths)):
        shape = [1] * f.grid.dim
        shape[axis] = -1
        phase = np.exp(2j * np.pi * x / length).reshape(shape)
        angle = np.angle(np.sum(density * phase))
        out.append((angle % (2 * np.pi)) * length / (2 * np.pi))
    return np.array(out)


def fit_velocity(times, positions, lengths) -> np.ndarray:
    """Least-squares velocity of a centroid track, unwrapping periodic jumps."""
    times = np.asarray(times, dtype=float)
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    if positions.shape[0] != times.size:
        positions = positions.T
    velocities = []
    for axis, length in enumerate(lengths):
        angle = positions[:, axis] * 2 * np.pi / length
        track = np.unwrap(angle) * length / (2 * np.pi)
        velocities.append(np.polyfit(times, track, 1)[0])
    return np.array(velocities)
