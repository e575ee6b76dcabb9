"""Periodic grids, physical constants and complex fields.

Conventions
-----------
The forward transform is the plain DFT sum (``numpy.fft.fftn`` with the
default ``"backward"`` norm) and the inverse carries ``1/prod(N)``.  With
cell volume ``dV = prod(L/N)`` the discrete L2 product is

    <f, g> = dV * sum(conj(f) * g)
           = (dV / prod(N)) * sum(conj(f_hat) * g_hat)

so inner products can be taken in either representation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    GridMismatchError,
    InvertibilityError,
    NonFiniteFieldError,
)

__all__ = [
    "PhysicalParams",
    "GridSpec",
    "Representation",
    "ComplexField",
    "CoupledState",
    "DiagonalState",
    "make_grid",
    "integrate_density",
    "inner",
    "norm_squared",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Constants entering the operator symbol: hbar, c and the mass."""

    hbar: float = 1.0
    c: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "c", "mass"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise ConfigurationError(f"must be a finite real number, got {value!r}", key=name)
        if self.hbar <= 0:
            raise ConfigurationError(f"must be > 0, got {self.hbar}", key="hbar")
        if self.c <= 0:
            raise ConfigurationError(f"must be > 0, got {self.c}", key="c")
        if self.mass <= 0:
            raise InvertibilityError(
                f"must be > 0, got {self.mass}; D = i*sqrt(m^2 c^4 - hbar^2 c^2 Laplacian) "
                "is only invertible for m > 0",
                key="mass",
            )

    @property
    def rest_energy(self) -> float:
        return self.mass * self.c**2


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on a box ``[0, L_1) x ... x [0, L_dim)``."""

    dim: int
    points: tuple[int, ...]
    lengths: tuple[float, ...]

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ConfigurationError(f"must be 1, 2 or 3, got {self.dim!r}", key="dim")
        if len(self.points) != self.dim:
            raise ConfigurationError(
                f"expected {self.dim} entries, got {len(self.points)}", key="points"
            )
        if len(self.lengths) != self.dim:
            raise ConfigurationError(
                f"expected {self.dim} entries, got {len(self.lengths)}", key="lengths"
            )
        for n in self.points:
            if int(n) != n or n < 2 or n % 2:
                raise ConfigurationError(f"point counts must be even and >= 2, got {n}", key="points")
        for length in self.lengths:
            if not math.isfinite(length) or length <= 0:
                raise ConfigurationError(f"lengths must be positive, got {length}", key="lengths")

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def size(self) -> int:
        return math.prod(self.points)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(length / n for length, n in zip(self.lengths, self.points))

    @property
    def cell_volume(self) -> float:
        return math.prod(self.spacing)

    @property
    def volume(self) -> float:
        return math.prod(self.lengths)

    @cached_property
    def axis_wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Per-axis wavenumbers ``2*pi*j/L`` with ``j`` wrapped to ``[-N/2, N/2)``."""
        return tuple(
            2.0 * np.pi * np.fft.fftfreq(n, d=length / n)
            for n, length in zip(self.points, self.lengths)
        )

    @cached_property
    def axis_coordinates(self) -> tuple[np.ndarray, ...]:
        return tuple(np.arange(n) * (length / n) for n, length in zip(self.points, self.lengths))

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays, one per axis."""
        return tuple(np.meshgrid(*self.axis_coordinates, indexing="ij", sparse=True))

    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.axis_wavenumbers, indexing="ij", sparse=True))

    @cached_property
    def k_squared(self) -> np.ndarray:
        ksq = np.zeros(self.shape)
        for k in self.wavenumbers():
            ksq = ksq + k**2
        ksq.setflags(write=False)
        return ksq

    def mode_wavevector(self, index: Sequence[int]) -> np.ndarray:
        """Wavevector of the integer mode ``index`` (one entry per axis)."""
        index = _as_index(index, self.dim)
        for j, n in zip(index, self.points):
            if not -n // 2 <= j < n // 2:
                raise ConfigurationError(f"mode index {j} outside [-{n // 2}, {n // 2})", key="mode")
        return np.array([2.0 * np.pi * j / length for j, length in zip(index, self.lengths)])


def _as_index(index, dim):
    if np.isscalar(index):
        index = (index,)
    index = tuple(int(j) for j in index)
    if len(index) != dim:
        raise ConfigurationError(f"expected {dim} mode indices, got {len(index)}", key="mode")
    return index


def make_grid(dim: int, points: Sequence[int], lengths: Sequence[float]) -> GridSpec:
    """Build a :class:`GridSpec`, validating every argument.

    >>> make_grid(1, [8], [2 * np.pi]).axis_wavenumbers[0]
    array([ 0.,  1.,  2.,  3., -4., -3., -2., -1.])
    """
    try:
        pts = tuple(int(n) if float(n).is_integer() else float(n) for n in points)
        lens = tuple(float(x) for x in lengths)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"cannot interpret grid arguments: {exc}") from exc
    return GridSpec(int(dim), pts, lens)


class Representation(str, enum.Enum):
    POSITION = "position"
    SPECTRAL = "spectral"


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex samples on a grid, in position or spectral representation.

    ``values`` has shape ``grid.shape`` (row-major); ``values.ravel()`` gives
    the flat layout used in snapshots.
    """

    grid: GridSpec
    values: np.ndarray
    representation: Representation = Representation.POSITION

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.grid.shape:
            if values.size == self.grid.size:
                values = values.reshape(self.grid.shape)
            else:
                raise GridMismatchError(
                    f"values of shape {values.shape} do not fit grid {self.grid.shape}"
                )
        if not np.all(np.isfinite(values)):
            raise NonFiniteFieldError("field contains NaN or Inf")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "representation", Representation(self.representation))

    @classmethod
    def zeros(cls, grid: GridSpec) -> ComplexField:
        return cls(grid, np.zeros(grid.shape, dtype=complex))

    @property
    def is_spectral(self) -> bool:
        return self.representation is Representation.SPECTRAL

    def to_spectral(self) -> ComplexField:
        if self.is_spectral:
            return self
        return ComplexField(self.grid, np.fft.fftn(self.values), Representation.SPECTRAL)

    def to_position(self) -> ComplexField:
        if not self.is_spectral:
            return self
        return ComplexField(self.grid, np.fft.ifftn(self.values), Representation.POSITION)

    def as_representation(self, representation) -> ComplexField:
        if Representation(representation) is Representation.SPECTRAL:
            return self.to_spectral()
        return self.to_position()

    def with_values(self, values) -> ComplexField:
        """Same grid and representation, new values."""
        return ComplexField(self.grid, values, self.representation)

    def _aligned(self, other: ComplexField) -> np.ndarray:
        if other.grid != self.grid:
            raise GridMismatchError("fields live on different grids")
        return other.as_representation(self.representation).values

    def __add__(self, other):
        if isinstance(other, ComplexField):
            return self.with_values(self.values + self._aligned(other))
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, ComplexField):
            return self.with_values(self.values - self._aligned(other))
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, ComplexField):
            return NotImplemented
        return self.with_values(self.values * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, ComplexField):
            return NotImplemented
        return self.with_values(self.values / complex(scalar))

    def __neg__(self):
        return self.with_values(-self.values)

    def __repr__(self):
        return (
            f"ComplexField(grid={self.grid.shape}, representation={self.representation.value}, "
            f"norm={math.sqrt(norm_squared(self)):.6g})"
        )


def require_same_grid(*fields: ComplexField) -> GridSpec:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError("fields live on different grids")
    return grid


@dataclass(frozen=True)
class CoupledState:
    """The embedded pair ``(psi, chi)`` at time ``t``."""

    psi: ComplexField
    chi: ComplexField
    t: float = 0.0

    def __post_init__(self):
        require_same_grid(self.psi, self.chi)

    @property
    def grid(self) -> GridSpec:
        return self.psi.grid


@dataclass(frozen=True)
class DiagonalState:
    """Forward and backward components ``eta_plus``, ``eta_minus`` at time ``t``."""

    eta_plus: ComplexField
    eta_minus: ComplexField
    t: float = 0.0

    def __post_init__(self):
        require_same_grid(self.eta_plus, self.eta_minus)

    @property
    def grid(self) -> GridSpec:
        return self.eta_plus.grid


def integrate_density(grid: GridSpec, density) -> float:
    """Rectangle-rule integral ``dV * sum(density)`` of a real density."""
    density = np.asarray(density)
    if np.iscomplexobj(density):
        raise TypeError("integrate_density expects a real-valued density")
    if density.size != grid.size:
        raise GridMismatchError(f"density of size {density.size} does not fit grid {grid.shape}")
    if not np.all(np.isfinite(density)):
        raise NonFiniteFieldError("density contains NaN or Inf")
    return float(grid.cell_volume * np.sum(density))


def inner(f: ComplexField, g: ComplexField) -> complex:
    """Discrete L2 product ``dV * sum(conj(f) * g)``, conjugate-linear in ``f``."""
    grid = require_same_grid(f, g)
    if f.is_spectral and g.is_spectral:
        return complex(grid.cell_volume / grid.size * np.vdot(f.values, g.values))
    return complex(grid.cell_volume * np.vdot(f.to_position().values, g.to_position().values))


def norm_squared(f: ComplexField) -> float:
    """``integral |f|^2`` evaluated in whichever representation ``f`` is stored."""
    grid = f.grid
    weight = grid.cell_volume / grid.size if f.is_spectral else grid.cell_volume
    return float(weight * np.sum(np.abs(f.values) ** 2))
