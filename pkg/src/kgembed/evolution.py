"""Time integration: exact diagonal flow, RK4 on (psi, chi), leapfrog on psi.

The three schemes play different roles.  ``exact`` multiplies each
component by its phase ``exp(-+i E dt / hbar)`` and is exact up to rounding.
``rk4_coupled`` integrates the first-order coupled system generically.
``leapfrog_kg`` advances the second-order equation
``hbar^2 psi_tt = -H^2 psi`` directly and never forms ``chi`` or ``eta``; it
serves as an independent check on the other two.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from .diagnostics import DiagnosticsRecord, record_from_state
from .embedding import dpsi_dt_of, diagonalize, embed, recompose
from .errors import ConfigurationError, NonFiniteFieldError, NumericalBlowupError
from .grid import ComplexField, CoupledState, DiagonalState, PhysicalParams
from .operators import OperatorSymbol, apply_H, apply_multiplier

__all__ = [
    "Scheme",
    "IntegratorConfig",
    "step_exact",
    "step_rk4",
    "step_leapfrog",
    "leapfrog_bootstrap",
    "leapfrog_stability_limit",
    "run",
]

State = Union[CoupledState, DiagonalState]
Sink = Callable[[DiagnosticsRecord], None]


class Scheme(str, enum.Enum):
    EXACT = "exact"
    RK4_COUPLED = "rk4_coupled"
    LEAPFROG_KG = "leapfrog_kg"


@dataclass(frozen=True)
class IntegratorConfig:
    scheme: Scheme = Scheme.EXACT
    dt: float = 0.01
    t_final: float = 10.0
    sample_stride: int = 1

    def __post_init__(self):
        try:
            object.__setattr__(self, "scheme", Scheme(self.scheme))
        except ValueError:
            raise ConfigurationError(
                f"unknown scheme {self.scheme!r}; choose from {[s.value for s in Scheme]}",
                key="scheme",
            ) from None
        if not math.isfinite(self.dt) or self.dt <= 0:
            raise ConfigurationError(f"must be > 0, got {self.dt}", key="dt")
        # t_final = 0 is allowed and means "emit the initial record only".
        if not math.isfinite(self.t_final) or self.t_final < 0:
            raise ConfigurationError(f"must be >= 0, got {self.t_final}", key="t_final")
        if 0 < self.t_final < self.dt:
            raise ConfigurationError(
                f"t_final={self.t_final} is shorter than one step dt={self.dt}", key="t_final"
            )
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ConfigurationError(f"must be a positive integer, got {self.sample_stride}",
                                     key="sample_stride")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    def check_stability(self, sym: OperatorSymbol) -> None:
        if self.scheme is Scheme.LEAPFROG_KG:
            limit = leapfrog_stability_limit(sym)
            if self.dt >= limit:
                raise ConfigurationError(
                    f"leapfrog requires dt < 2*hbar/E_max = {limit:.6g}, got {self.dt}", key="dt"
                )


def leapfrog_stability_limit(sym: OperatorSymbol) -> float:
    return 2.0 * sym.params.hbar / sym.maximum


def step_exact(d: DiagonalState, dt: float, sym: OperatorSymbol, params=None) -> DiagonalState:
    """Advance ``eta_plus`` forward and ``eta_minus`` backward by ``dt``.

    Negative ``dt`` runs the flow backwards.
    """
    hbar = (params or sym.params).hbar
    phase = np.exp(-1j * sym.values * (dt / hbar))
    return DiagonalState(
        apply_multiplier(d.eta_plus, phase),
        apply_multiplier(d.eta_minus, np.conj(phase)),
        d.t + dt,
    )


def step_rk4(state: CoupledState, dt: float, sym: OperatorSymbol, params=None) -> CoupledState:
    """One classical RK4 step of ``i hbar psi_t = H chi``, ``i hbar chi_t = H psi``."""
    hbar = (params or sym.params).hbar
    factor = -1j / hbar

    def rhs(psi, chi):
        return apply_H(chi, sym) * factor, apply_H(psi, sym) * factor

    psi, chi = state.psi, state.chi
    k1p, k1c = rhs(psi, chi)
    k2p, k2c = rhs(psi + k1p * (dt / 2), chi + k1c * (dt / 2))
    k3p, k3c = rhs(psi + k2p * (dt / 2), chi + k2c * (dt / 2))
    k4p, k4c = rhs(psi + k3p * dt, chi + k3c * dt)
    psi_new = psi + (k1p + 2 * k2p + 2 * k3p + k4p) * (dt / 6)
    chi_new = chi + (k1c + 2 * k2c + 2 * k3c + k4c) * (dt / 6)
    return CoupledState(psi_new, chi_new, state.t + dt)


def step_leapfrog(
    psi_prev: ComplexField,
    psi_curr: ComplexField,
    dt: float,
    sym: OperatorSymbol,
    params=None,
) -> ComplexField:
    """Central-difference step ``psi_next = 2 psi - psi_prev - (dt/hbar)^2 H^2 psi``."""
    hbar = (params or sym.params).hbar
    limit = leapfrog_stability_limit(sym)
    if abs(dt) >= limit:
        raise ConfigurationError(
            f"leapfrog requires |dt| < 2*hbar/E_max = {limit:.6g}, got {dt}", key="dt"
        )
    accel = apply_H(apply_H(psi_curr, sym), sym)
    return psi_curr * 2.0 - psi_prev - accel * (dt / hbar) ** 2


def leapfrog_bootstrap(
    psi0: ComplexField, dpsi_dt0: ComplexField, dt: float, sym: OperatorSymbol, params=None
) -> ComplexField:
    """Second-order Taylor start ``psi0 + dt psi_t - (dt^2 / 2 hbar^2) H^2 psi0``."""
    hbar = (params or sym.params).hbar
    accel = apply_H(apply_H(psi0, sym), sym)
    return psi0 + dpsi_dt0 * dt - accel * (dt**2 / (2 * hbar**2))


def run(
    initial: State,
    cfg: IntegratorConfig,
    sym: OperatorSymbol,
    params: Optional[PhysicalParams] = None,
    sink: Optional[Sink] = None,
    snapshot: Optional[Callable[[CoupledState, int], None]] = None,
    snapshot_stride: int = 1,
) -> State:
    """Integrate ``initial`` to ``cfg.t_final``.

    A :class:`DiagnosticsRecord` goes to ``sink`` at step 0, every
    ``cfg.sample_stride`` steps and at the last step.  ``snapshot`` (if
    given) receives the coupled state and step index every
    ``snapshot_stride`` steps.  The returned state has the same type and
    representation as ``initial``.
    """
    params = params or sym.params
    cfg.check_stability(sym)
    as_diagonal = isinstance(initial, DiagonalState)
    coupled = recompose(initial) if as_diagonal else initial
    representation = coupled.psi.representation
    t0 = coupled.t
    n_steps = cfg.n_steps

    def emit(step: int, build: Callable[[], tuple]):
        want_record = sink is not None and (step % cfg.sample_stride == 0 or step == n_steps)
        want_snapshot = snapshot is not None and (step % snapshot_stride == 0 or step == n_steps)
        if not (want_record or want_snapshot):
            return
        state, dpsi_dt = build()
        if want_record:
            sink(record_from_state(state, sym, params, dpsi_dt=dpsi_dt))
        if want_snapshot:
            snapshot(_in_position(state), step)

    try:
        if cfg.scheme is Scheme.LEAPFROG_KG:
            final = _run_leapfrog(coupled, cfg, sym, params, emit, t0)
        else:
            final = _run_first_order(coupled, cfg, sym, params, emit, t0)
    except NonFiniteFieldError as exc:
        raise NumericalBlowupError(f"{cfg.scheme.value} integration produced non-finite values") from exc

    if as_diagonal:
        if isinstance(final, CoupledState):
            final = diagonalize(final)
        return DiagonalState(
            final.eta_plus.as_representation(representation),
            final.eta_minus.as_representation(representation),
            final.t,
        )
    if isinstance(final, DiagonalState):
        final = recompose(final)
    return CoupledState(
        final.psi.as_representation(representation),
        final.chi.as_representation(representation),
        final.t,
    )


def _in_position(state: State) -> CoupledState:
    if isinstance(state, DiagonalState):
        state = recompose(state)
    return CoupledState(state.psi.to_position(), state.chi.to_position(), state.t)


def _run_first_order(coupled, cfg, sym, params, emit, t0):
    state = CoupledState(coupled.psi.to_spectral(), coupled.chi.to_spectral(), t0)
    if cfg.scheme is Scheme.EXACT:
        d = diagonalize(state)
        emit(0, lambda: (d, None))
        for n in range(1, cfg.n_steps + 1):
            d = replace(step_exact(d, cfg.dt, sym, params), t=t0 + n * cfg.dt)
            emit(n, lambda: (d, None))
        return d
    emit(0, lambda: (state, None))
    for n in range(1, cfg.n_steps + 1):
        state = replace(step_rk4(state, cfg.dt, sym, params), t=t0 + n * cfg.dt)
        emit(n, lambda: (state, None))
    return state


def _run_leapfrog(coupled, cfg, sym, params, emit, t0):
    dt = cfg.dt
    psi0 = coupled.psi.to_spectral()
    dpsi0 = dpsi_dt_of(CoupledState(psi0, coupled.chi.to_spectral(), t0), sym, params)
    emit(0, lambda: (embed(psi0, dpsi0, sym, params, t=t0), dpsi0))
    if cfg.n_steps == 0:
        return embed(psi0, dpsi0, sym, params, t=t0)

    prev, curr = psi0, leapfrog_bootstrap(psi0, dpsi0, dt, sym, params)
    for n in range(1, cfg.n_steps + 1):
        nxt = step_leapfrog(prev, curr, dt, sym, params)

        def build(psi=curr, dpsi=(nxt - prev) / (2 * dt), t=t0 + n * dt):
            # dpsi/dt at step n from the symmetric difference of its neighbours
            return embed(psi, dpsi, sym, params, t=t), dpsi

        emit(n, build)
        if n == cfg.n_steps:
            return build()[0]
        prev, curr = curr, nxt
