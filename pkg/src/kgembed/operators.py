"""Fourier multipliers for the relativistic energy operator and its relatives.

All operators are diagonal in the plane-wave basis.  ``H`` multiplies mode
``k`` by ``E(k) = sqrt(m^2 c^4 + c^2 hbar^2 |k|^2)``, ``D = iH`` and
``D* = -D``.  A field given in spectral representation is multiplied in
place; a position field is transformed, multiplied and transformed back, so
the output always has the representation of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, InvertibilityError
from .grid import ComplexField, GridSpec, PhysicalParams, Representation

__all__ = [
    "OperatorSymbol",
    "build_symbol",
    "apply_multiplier",
    "apply_H",
    "apply_H_inv",
    "apply_D",
    "apply_D_inv",
    "apply_Dstar",
    "apply_Pi",
]


@dataclass(frozen=True, eq=False)
class OperatorSymbol:
    """Values of ``E(k)`` at every grid wavenumber (energy units)."""

    grid: GridSpec
    values: np.ndarray
    params: PhysicalParams

    @property
    def minimum(self) -> float:
        return float(self.values.min())

    @property
    def maximum(self) -> float:
        return float(self.values.max())


def build_symbol(grid: GridSpec, params: PhysicalParams) -> OperatorSymbol:
    """Tabulate ``E(k)`` on ``grid``.

    The square root is the principal branch; ``E(k) >= m c^2 > 0`` so every
    value is invertible.
    """
    if not params.mass > 0:
        # PhysicalParams already rejects this; guard against hand-built objects.
        raise InvertibilityError("mass must be > 0 for D to be invertible", key="mass")
    m, c, hbar = params.mass, params.c, params.hbar
    values = np.sqrt(m**2 * c**4 + (c * hbar) ** 2 * grid.k_squared)
    values.setflags(write=False)
    return OperatorSymbol(grid, values, params)


def apply_multiplier(f: ComplexField, multiplier: np.ndarray | complex) -> ComplexField:
    """Multiply ``f`` by a Fourier multiplier, keeping its representation."""
    spectral = f.to_spectral()
    out = ComplexField(f.grid, spectral.values * multiplier, Representation.SPECTRAL)
    return out.as_representation(f.representation)


def _check(f: ComplexField, sym: OperatorSymbol):
    if f.grid != sym.grid:
        raise GridMismatchError("field and operator symbol live on different grids")


def apply_H(f: ComplexField, sym: OperatorSymbol) -> ComplexField:
    _check(f, sym)
    return apply_multiplier(f, sym.values)


def apply_H_inv(f: ComplexField, sym: OperatorSymbol) -> ComplexField:
    _check(f, sym)
    return apply_multiplier(f, 1.0 / sym.values)


def apply_D(f: ComplexField, sym: OperatorSymbol) -> ComplexField:
    """``D f = i H f``."""
    _check(f, sym)
    return apply_multiplier(f, 1j * sym.values)


def apply_D_inv(f: ComplexField, sym: OperatorSymbol) -> ComplexField:
    """``D^-1 f = -i H^-1 f``."""
    _check(f, sym)
    return apply_multiplier(f, -1j / sym.values)


def apply_Dstar(f: ComplexField, sym: OperatorSymbol) -> ComplexField:
    """Adjoint of ``D``; for this choice of ``D`` it equals ``-D``."""
    _check(f, sym)
    return apply_multiplier(f, -1j * sym.values)


def apply_Pi(
    f: ComplexField,
    dfdt: ComplexField,
    sign: int | str,
    sym: OperatorSymbol,
    params: PhysicalParams | None = None,
) -> ComplexField:
    """Project a Klein-Gordon configuration onto its forward/backward part.

    Returns ``f + s * i * H^-1 (hbar * dfdt)`` with ``s = +1`` for ``sign="+"``
    and ``s = -1`` for ``sign="-"``.  Unnormalized: for a solution of the
    coupled system this is exactly ``eta_plus`` or ``eta_minus``.
    """
    s = _sign(sign)
    _check(f, sym)
    if dfdt.grid != f.grid:
        raise GridMismatchError("f and dfdt live on different grids")
    hbar = (params or sym.params).hbar
    correction = apply_multiplier(dfdt, (s * 1j * hbar) / sym.values)
    return f + correction


def _sign(sign) -> int:
    if sign in ("+", "plus", +1):
        return +1
    if sign in ("-", "minus", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")
