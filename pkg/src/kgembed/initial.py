"""Initial data: plane waves, Gaussian packets and pure forward/backward states.

Every constructor returns ``(psi0, dpsi_dt0)`` except the ``pure_*`` kinds,
which prescribe ``eta_plus``/``eta_minus`` directly.  ``branch="plus"``
gives a purely forward state (``eta_minus = 0``), ``"minus"`` a purely
backward one and ``"standing"`` has ``dpsi_dt0 = 0`` so both components
carry equal weight.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .embedding import embed, from_components
from .errors import ConfigurationError
from .grid import ComplexField, CoupledState, GridSpec, PhysicalParams, norm_squared
from .operators import OperatorSymbol, apply_H

__all__ = [
    "Branch",
    "InitialKind",
    "InitialConditionSpec",
    "make_plane_wave",
    "make_superposition",
    "gaussian_profile",
    "make_gaussian",
    "make_pure_state",
    "build_initial_state",
]

WRAP_IMAGES = 3


class Branch(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    STANDING = "standing"


class InitialKind(str, enum.Enum):
    PLANE_WAVE = "plane_wave"
    GAUSSIAN = "gaussian"
    PURE_PLUS = "pure_plus"
    PURE_MINUS = "pure_minus"
    SUPERPOSITION = "superposition"


def _time_derivative(psi0, branch, sym, params):
    branch = Branch(branch)
    if branch is Branch.STANDING:
        return ComplexField.zeros(psi0.grid)
    sign = -1.0 if branch is Branch.PLUS else 1.0
    return apply_H(psi0, sym) * (sign * 1j / params.hbar)


def make_plane_wave(
    grid: GridSpec,
    mode_index,
    branch,
    sym: OperatorSymbol,
    params: PhysicalParams | None = None,
    amplitude: complex = 1.0,
):
    """``psi0 = A exp(i k.x)`` for the integer mode ``mode_index``."""
    params = params or sym.params
    k = grid.mode_wavevector(mode_index)
    phase = sum(kk * x for kk, x in zip(k, grid.coordinates()))
    psi0 = ComplexField(grid, amplitude * np.exp(1j * phase) * np.ones(grid.shape))
    return psi0, _time_derivative(psi0, branch, sym, params)


def make_superposition(grid, modes, amplitudes, branch, sym, params=None):
    """Sum of plane waves sharing one branch."""
    params = params or sym.params
    if len(modes) == 0:
        raise ConfigurationError("superposition needs at least one component", key="initial.modes")
    if len(modes) != len(amplitudes):
        raise ConfigurationError(
            f"{len(modes)} modes but {len(amplitudes)} amplitudes", key="initial.amplitudes"
        )
    psi0 = ComplexField.zeros(grid)
    for mode, amp in zip(modes, amplitudes):
        psi0 = psi0 + make_plane_wave(grid, mode, Branch.STANDING, sym, params, amp)[0]
    return psi0, _time_derivative(psi0, branch, sym, params)


def _check_width(grid: GridSpec, width: float):
    if not width > 0:
        raise ConfigurationError(f"width must be > 0, got {width}", key="initial.width")
    finest = max(grid.spacing)
    if width < 2 * finest:
        raise ConfigurationError(
            f"width {width} is below two grid spacings ({2 * finest:.6g})", key="initial.width"
        )
    if width > min(grid.lengths) / 8:
        raise ConfigurationError(
            f"width {width} exceeds L/8 = {min(grid.lengths) / 8:.6g}", key="initial.width"
        )


def gaussian_profile(grid: GridSpec, center, width: float, mean_wavenumber, amplitude=1.0):
    """Periodized ``exp(-|x-x0|^2 / (4 w^2)) exp(i k0.x)`` with unit L2 norm times ``|amplitude|``.

    The periodization sums ``WRAP_IMAGES`` images on each side per axis;
    the packet is separable so the sum factorizes over axes.
    """
    center = _per_axis(center, grid.dim, "initial.center")
    k0 = _per_axis(mean_wavenumber, grid.dim, "initial.mean_wavenumber")
    _check_width(grid, width)
    values = np.ones(grid.shape, dtype=complex)
    for axis, (x, length) in enumerate(zip(grid.axis_coordinates, grid.lengths)):
        images = np.arange(-WRAP_IMAGES, WRAP_IMAGES + 1)[:, None] * length
        shifted = x[None, :] + images
        factor = np.sum(
            np.exp(-((shifted - center[axis]) ** 2) / (4 * width**2) + 1j * k0[axis] * shifted),
            axis=0,
        )
        shape = [1] * grid.dim
        shape[axis] = -1
        values = values * factor.reshape(shape)
    field_ = ComplexField(grid, values)
    return field_ * (amplitude / math.sqrt(norm_squared(field_)))


def make_gaussian(
    grid: GridSpec,
    center,
    width: float,
    mean_wavenumber,
    branch,
    sym: OperatorSymbol,
    params: PhysicalParams | None = None,
    amplitude: complex = 1.0,
):
    """Gaussian packet normalized to ``int |psi0|^2 = |amplitude|^2``.

    For ``plus``/``minus`` branches ``dpsi_dt0 = -+(i/hbar) H psi0``, which
    makes the state purely forward/backward.
    """
    params = params or sym.params
    psi0 = gaussian_profile(grid, center, width, mean_wavenumber, amplitude)
    return psi0, _time_derivative(psi0, branch, sym, params)


def make_pure_state(grid, sign, center, width, mean_wavenumber, amplitude=1.0) -> CoupledState:
    """Coupled state whose only nonzero component is a unit-norm Gaussian ``eta_pm``."""
    packet = gaussian_profile(grid, center, width, mean_wavenumber, amplitude)
    zero = ComplexField.zeros(grid)
    if sign in ("+", "plus", +1):
        return from_components(packet, zero)
    if sign in ("-", "minus", -1):
        return from_components(zero, packet)
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def _per_axis(value, dim, key):
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1 and dim > 1:
        arr = np.repeat(arr, dim)
    if arr.size != dim:
        raise ConfigurationError(f"expected {dim} values, got {arr.size}", key=key)
    return arr


@dataclass(frozen=True)
class InitialConditionSpec:
    """Declarative description of initial data, as read from a run config.

    ``center`` defaults to the middle of the box when left as ``None``.
    """

    kind: InitialKind = InitialKind.GAUSSIAN
    branch: Branch = Branch.PLUS
    amplitude: complex = 1.0
    modes: tuple = ()
    amplitudes: tuple = ()
    center: tuple | None = None
    width: float = 2.0
    mean_wavenumber: tuple = (0.5,)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", InitialKind(self.kind))
        except ValueError:
            raise ConfigurationError(f"unknown kind {self.kind!r}", key="initial.kind") from None
        try:
            object.__setattr__(self, "branch", Branch(self.branch))
        except ValueError:
            raise ConfigurationError(f"unknown branch {self.branch!r}", key="initial.branch") from None
        if self.kind in (InitialKind.GAUSSIAN, InitialKind.PURE_PLUS, InitialKind.PURE_MINUS):
            if not self.width > 0:
                raise ConfigurationError(f"must be > 0, got {self.width}", key="initial.width")
        if self.kind is InitialKind.PLANE_WAVE and len(self.modes) != 1:
            raise ConfigurationError("plane_wave takes exactly one mode", key="initial.modes")
        if self.kind is InitialKind.SUPERPOSITION and len(self.modes) < 1:
            raise ConfigurationError("superposition needs at least one mode", key="initial.modes")

    def validate_for(self, grid: GridSpec):
        """Grid-dependent checks; raises :class:`ConfigurationError`."""
        if self.kind in (InitialKind.PLANE_WAVE, InitialKind.SUPERPOSITION):
            for mode in self.modes:
                grid.mode_wavevector(mode)
        else:
            _check_width(grid, self.width)
            _per_axis(self.mean_wavenumber, grid.dim, "initial.mean_wavenumber")
            if self.center is not None:
                _per_axis(self.center, grid.dim, "initial.center")


def build_initial_state(
    spec: InitialConditionSpec, grid: GridSpec, sym: OperatorSymbol, params=None
) -> CoupledState:
    params = params or sym.params
    spec.validate_for(grid)
    center = spec.center if spec.center is not None else tuple(length / 2 for length in grid.lengths)
    kind = spec.kind
    if kind is InitialKind.PLANE_WAVE:
        psi0, dpsi0 = make_plane_wave(grid, spec.modes[0], spec.branch, sym, params, spec.amplitude)
    elif kind is InitialKind.SUPERPOSITION:
        amps = spec.amplitudes or (spec.amplitude,) * len(spec.modes)
        psi0, dpsi0 = make_superposition(grid, spec.modes, amps, spec.branch, sym, params)
    elif kind is InitialKind.GAUSSIAN:
        psi0, dpsi0 = make_gaussian(
            grid, center, spec.width, spec.mean_wavenumber, spec.branch, sym, params, spec.amplitude
        )
    else:
        sign = "+" if kind is InitialKind.PURE_PLUS else "-"
        return make_pure_state(grid, sign, center, spec.width, spec.mean_wavenumber, spec.amplitude)
    return embed(psi0, dpsi0, sym, params)
