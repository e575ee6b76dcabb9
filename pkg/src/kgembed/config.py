"""Flat dotted-key run configuration.

One ``key = value`` per line, ``#`` starts a comment, order does not
matter and unknown keys are rejected.  Lists are comma separated; mode
lists separate modes with ``;`` and axes with ``,``::

    params.mass = 1.0
    grid.dim = 1
    grid.points = 256
    grid.lengths = 62.83185307179586
    initial.kind = gaussian
    initial.branch = plus
    integrator.scheme = exact
    integrator.dt = 0.01
    integrator.t_final = 10
    outputs.diagnostics_path = diagnostics.csv

Every key has a default (see :data:`DEFAULTS`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Mapping

from .errors import ConfigurationError
from .evolution import IntegratorConfig, Scheme
from .grid import GridSpec, PhysicalParams, make_grid
from .initial import Branch, InitialConditionSpec, InitialKind

__all__ = [
    "ConfigParseError",
    "OutputSpec",
    "CheckThresholds",
    "RunConfig",
    "DEFAULTS",
    "read_pairs",
    "parse_config",
    "config_from_mapping",
    "format_config",
    "load_config",
]


class ConfigParseError(ConfigurationError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class OutputSpec:
    diagnostics_path: str = "diagnostics.csv"
    snapshot_path: str | None = None
    snapshot_stride: int = 1

    def __post_init__(self):
        if int(self.snapshot_stride) != self.snapshot_stride or self.snapshot_stride < 1:
            raise ConfigurationError(
                f"must be a positive integer, got {self.snapshot_stride}", key="outputs.snapshot_stride"
            )
        if not self.diagnostics_path:
            raise ConfigurationError("must not be empty", key="outputs.diagnostics_path")


@dataclass(frozen=True)
class CheckThresholds:
    """Pass/fail limits used by ``kgembed check``."""

    conservation_tol: float = 1e-12
    identity_tol: float = 1e-10
    oracle_dt: float = 2e-3
    oracle_t_final: float = 5.0
    oracle_ratio_min: float = 3.5
    oracle_ratio_max: float = 4.5
    projector_tol: float = 1e-12
    projector_samples: int = 100
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    grid: GridSpec
    initial: InitialConditionSpec
    integrator: IntegratorConfig
    outputs: OutputSpec = field(default_factory=OutputSpec)
    check: CheckThresholds = field(default_factory=CheckThresholds)


DEFAULTS: dict[str, str] = {
    "params.hbar": "1.0",
    "params.c": "1.0",
    "params.mass": "1.0",
    "grid.dim": "1",
    "grid.points": "256",
    "grid.lengths": repr(20 * math.pi),
    "initial.kind": "gaussian",
    "initial.branch": "plus",
    "initial.amplitude": "1.0",
    "initial.modes": "",
    "initial.amplitudes": "",
    "initial.center": "auto",
    "initial.width": "2.0",
    "initial.mean_wavenumber": "0.5",
    "integrator.scheme": "exact",
    "integrator.dt": "0.01",
    "integrator.t_final": "10.0",
    "integrator.sample_stride": "1",
    "outputs.diagnostics_path": "diagnostics.csv",
    "outputs.snapshot_path": "none",
    "outputs.snapshot_stride": "1",
    **{f"check.{f.name}": repr(f.default) for f in fields(CheckThresholds)},
}


def read_pairs(text: str) -> dict[str, str]:
    """Split config text into ``{key: raw value}``; syntax errors carry line numbers."""
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigParseError("missing key", line=lineno)
        if key not in DEFAULTS:
            raise ConfigParseError(f"unknown key {key!r}", line=lineno)
        if key in pairs:
            raise ConfigParseError(f"duplicate key {key!r}", line=lineno)
        pairs[key] = value
    return pairs


def _num(pairs, key, kind=float):
    raw = pairs[key]
    try:
        value = kind(raw)
    except ValueError:
        raise ConfigurationError(f"cannot parse {raw!r} as {kind.__name__}", key=key) from None
    if kind is float and not math.isfinite(value):
        raise ConfigurationError(f"must be finite, got {raw!r}", key=key)
    return value


def _int(pairs, key):
    raw = pairs[key]
    try:
        value = float(raw)
    except ValueError:
        raise ConfigurationError(f"cannot parse {raw!r} as an integer", key=key) from None
    if not value.is_integer():
        raise ConfigurationError(f"must be an integer, got {raw!r}", key=key)
    return int(value)


def _list(pairs, key, kind=float, dim=None):
    raw = pairs[key]
    items = [s.strip() for s in raw.split(",") if s.strip()]
    try:
        values = [kind(s) for s in items]
    except ValueError:
        raise ConfigurationError(f"cannot parse {raw!r} as a list of {kind.__name__}", key=key) from None
    if dim is not None and len(values) == 1 and dim > 1:
        values = values * dim
    return tuple(values)


def _modes(pairs, key):
    raw = pairs[key].strip()
    if not raw:
        return ()
    out = []
    for chunk in raw.split(";"):
        try:
            out.append(tuple(int(s) for s in chunk.split(",")))
        except ValueError:
            raise ConfigurationError(f"cannot parse mode {chunk.strip()!r}", key=key) from None
    return tuple(out)


def _rekey(exc: ConfigurationError, prefix: str) -> ConfigurationError:
    key = exc.key if exc.key is None or exc.key.startswith(prefix) or "." in exc.key else f"{prefix}.{exc.key}"
    message = str(exc).split(": ", 1)[1] if exc.key is not None else str(exc)
    return type(exc)(message, key=key)


def config_from_mapping(overrides: Mapping[str, str]) -> RunConfig:
    unknown = set(overrides) - set(DEFAULTS)
    if unknown:
        raise ConfigurationError(f"unknown keys {sorted(unknown)}")
    p = {**DEFAULTS, **{k: str(v) for k, v in overrides.items()}}

    try:
        params = PhysicalParams(
            hbar=_num(p, "params.hbar"), c=_num(p, "params.c"), mass=_num(p, "params.mass")
        )
    except ConfigurationError as exc:
        raise _rekey(exc, "params") from None

    dim = _int(p, "grid.dim")
    try:
        grid = make_grid(
            dim, _list(p, "grid.points", float, dim), _list(p, "grid.lengths", float, dim)
        )
    except ConfigurationError as exc:
        raise _rekey(exc, "grid") from None

    center = None if p["initial.center"].strip().lower() in ("auto", "") else _list(p, "initial.center")
    amplitudes = _list(p, "initial.amplitudes", complex)
    try:
        initial = InitialConditionSpec(
            kind=p["initial.kind"].strip(),
            branch=p["initial.branch"].strip(),
            amplitude=_num(p, "initial.amplitude", complex),
            modes=_modes(p, "initial.modes"),
            amplitudes=amplitudes,
            center=center,
            width=_num(p, "initial.width"),
            mean_wavenumber=_list(p, "initial.mean_wavenumber"),
        )
        initial.validate_for(grid)
    except ConfigurationError as exc:
        raise _rekey(exc, "initial") from None

    try:
        integrator = IntegratorConfig(
            scheme=p["integrator.scheme"].strip(),
            dt=_num(p, "integrator.dt"),
            t_final=_num(p, "integrator.t_final"),
            sample_stride=_int(p, "integrator.sample_stride"),
        )
    except ConfigurationError as exc:
        raise _rekey(exc, "integrator") from None

    snapshot = p["outputs.snapshot_path"].strip()
    try:
        outputs = OutputSpec(
            diagnostics_path=p["outputs.diagnostics_path"].strip(),
            snapshot_path=None if snapshot.lower() in ("none", "") else snapshot,
            snapshot_stride=_int(p, "outputs.snapshot_stride"),
        )
    except ConfigurationError as exc:
        raise _rekey(exc, "outputs") from None

    check_kwargs = {}
    for f in fields(CheckThresholds):
        key = f"check.{f.name}"
        check_kwargs[f.name] = _int(p, key) if isinstance(f.default, int) else _num(p, key)
    return RunConfig(params, grid, initial, integrator, outputs, CheckThresholds(**check_kwargs))


def parse_config(text: str) -> RunConfig:
    return config_from_mapping(read_pairs(text))


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _fmt_list(values):
    return ", ".join(repr(v) for v in values)


def format_config(cfg: RunConfig) -> str:
    """Serialize ``cfg``; ``parse_config(format_config(cfg)) == cfg``."""
    init = cfg.initial
    pairs = {
        "params.hbar": repr(cfg.params.hbar),
        "params.c": repr(cfg.params.c),
        "params.mass": repr(cfg.params.mass),
        "grid.dim": str(cfg.grid.dim),
        "grid.points": ", ".join(str(n) for n in cfg.grid.points),
        "grid.lengths": _fmt_list(cfg.grid.lengths),
        "initial.kind": InitialKind(init.kind).value,
        "initial.branch": Branch(init.branch).value,
        "initial.amplitude": repr(complex(init.amplitude)),
        "initial.modes": "; ".join(", ".join(str(j) for j in m) for m in init.modes),
        "initial.amplitudes": _fmt_list(complex(a) for a in init.amplitudes),
        "initial.center": "auto" if init.center is None else _fmt_list(init.center),
        "initial.width": repr(init.width),
        "initial.mean_wavenumber": _fmt_list(init.mean_wavenumber),
        "integrator.scheme": Scheme(cfg.integrator.scheme).value,
        "integrator.dt": repr(cfg.integrator.dt),
        "integrator.t_final": repr(cfg.integrator.t_final),
        "integrator.sample_stride": str(cfg.integrator.sample_stride),
        "outputs.diagnostics_path": cfg.outputs.diagnostics_path,
        "outputs.snapshot_path": cfg.outputs.snapshot_path or "none",
        "outputs.snapshot_stride": str(cfg.outputs.snapshot_stride),
    }
    for f in fields(CheckThresholds):
        pairs[f"check.{f.name}"] = repr(getattr(cfg.check, f.name))
    return "".join(f"{k} = {v}\n" for k, v in pairs.items())
