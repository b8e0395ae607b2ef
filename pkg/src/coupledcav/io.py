"""Run configuration parsing and CSV/JSON output."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np
import yaml

from . import __version__, _ode
from .amplitudes import BACKENDS
from .core import PureQubitInit, SiteParams, TimeGrid, validate_params
from .errors import CoupledCavError, ParseError, ValidationError
from .sweeps import OBSERVABLES, TWO_SITE_OBSERVABLES
from .twoqubit import BellLikeInit, TwoSiteParams

MODES = ("simulate", "coherence", "nonmarkov", "twoqubit", "sweep", "reproduce")
FORMATS = ("csv", "json")
INPUT_NORM_TOL = 1e-6

SITE_KEYS = {"kappa", "j", "gamma2", "delta", "omega"}
TWO_KEYS = {f"{k}_{s}" for k in ("kappa", "j", "gamma2", "delta") for s in "ab"}
INIT_KEYS = {"alpha", "beta"}
COMMON_KEYS = {"mode", "backend", "out", "format", "t_end", "n", "gamma1", "units"}
SWEEP_KEYS = {"vary", "values", "observable"}
REPRODUCE_KEYS = {"preset", "out_dir"}
ALL_KEYS = SITE_KEYS | TWO_KEYS | INIT_KEYS | COMMON_KEYS | SWEEP_KEYS | REPRODUCE_KEYS
RATE_KEYS = SITE_KEYS | TWO_KEYS | {"gamma1"}

DEFAULT_T_END = 15.0
DEFAULT_N = 1501


@dataclass(frozen=True)
class RunConfig:
    mode: str
    params: SiteParams | TwoSiteParams | None = None
    init: PureQubitInit | BellLikeInit | None = None
    grid: TimeGrid | None = None
    backend: str = "analytic"
    output_path: str | None = None
    format: str = "csv"
    vary: str | None = None
    values: tuple[float, ...] | None = None
    observable: str | None = None
    preset: str | None = None
    out_dir: str | None = None
    gamma1_mhz: float | None = None

    @property
    def two_site(self) -> bool:
        return isinstance(self.params, TwoSiteParams)


def _number(raw: Mapping, key: str, default=None, kind=float):
    if key not in raw or raw[key] is None:
        if default is None:
            raise ValidationError(f"missing required key {key!r}")
        return default
    value = raw[key]
    try:
        if isinstance(value, bool):
            raise TypeError
        return kind(value.replace(" ", "") if isinstance(value, str) else value)
    except (TypeError, ValueError):
        raise ParseError(f"expected a number, got {value!r}", key=key) from None


def _init_weights(raw: Mapping, default: tuple[complex, complex]) -> tuple[complex, complex]:
    has_a, has_b = "alpha" in raw, "beta" in raw
    if not has_a and not has_b:
        return default
    if has_a and has_b:
        a, b = _number(raw, "alpha", kind=complex), _number(raw, "beta", kind=complex)
    elif has_a:
        a = _number(raw, "alpha", kind=complex)
        b = complex(math.sqrt(max(0.0, 1 - abs(a) ** 2)))
    else:
        b = _number(raw, "beta", kind=complex)
        a = complex(math.sqrt(max(0.0, 1 - abs(b) ** 2)))
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1) > INPUT_NORM_TOL:
        raise ValidationError(f"|alpha|^2 + |beta|^2 must be 1, got {norm:.6g}")
    if abs(norm - 1) > 1e-12:
        # inputs quoted to finite precision are renormalized
        a, b = a / math.sqrt(norm), b / math.sqrt(norm)
    return _simplify(a), _simplify(b)


def _simplify(x: complex):
    return x.real if x.imag == 0 else x


def _units_scale(raw: Mapping) -> float | None:
    units = raw.get("units")
    if units is None:
        return None
    if isinstance(units, Mapping):
        unknown = set(units) - {"rates"}
        if unknown:
            raise ParseError(f"unknown units keys {sorted(unknown)}", key="units")
        units = units.get("rates", "gamma1")
    if str(units).lower() == "gamma1":
        return None
    if str(units).lower() != "mhz":
        raise ParseError(f"units must be 'gamma1' or 'MHz', got {units!r}", key="units")
    return _number(raw, "gamma1")


def config_from_mapping(raw: Mapping[str, Any]) -> RunConfig:
    """Validate a flat key-value mapping into a ``RunConfig``."""
    if not isinstance(raw, Mapping):
        raise ParseError("configuration must be a mapping of keys to values")
    unknown = set(raw) - ALL_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", key=sorted(unknown)[0])
    mode = raw.get("mode")
    if mode not in MODES:
        raise ParseError(f"mode must be one of {MODES}, got {mode!r}", key="mode")

    if mode == "reproduce":
        if "preset" not in raw:
            raise ValidationError("reproduce needs a 'preset'")
        extra = set(raw) - REPRODUCE_KEYS - {"mode", "format"}
        if extra:
            raise ParseError(f"keys {sorted(extra)} do not apply to reproduce", key=sorted(extra)[0])
        fmt = raw.get("format", "csv")
        if fmt not in FORMATS:
            raise ParseError(f"format must be one of {FORMATS}", key="format")
        return RunConfig(mode, preset=str(raw["preset"]), out_dir=str(raw.get("out_dir", ".")), format=fmt)

    scale = _units_scale(raw)
    rate_div = scale or 1.0

    def rate(key, default=None):
        return _number(raw, key, default) / rate_div

    gamma1 = _number(raw, "gamma1", 1.0) / rate_div
    observable = raw.get("observable")
    if mode == "sweep" and observable not in OBSERVABLES:
        raise ParseError(f"observable must be one of {OBSERVABLES}", key="observable")
    two_site = mode == "twoqubit" or (mode == "sweep" and observable in TWO_SITE_OBSERVABLES)

    if two_site:

        def per_site(name, s, default=None):
            shared = _number(raw, name, default) if (name in raw or default is not None) else None
            return _number(raw, f"{name}_{s}", shared) / rate_div

        sites = [
            SiteParams(
                kappa=per_site("kappa", s),
                j_coupling=per_site("j", s, 0.0),
                gamma1=gamma1,
                gamma2=per_site("gamma2", s, 0.0),
                detuning=per_site("delta", s, 0.0),
                omega=rate("omega", 0.0),
            )
            for s in "ab"
        ]
        params = TwoSiteParams(*sites)
        a, b = _init_weights(raw, (math.sqrt(1 / 3), math.sqrt(2 / 3)))
        init = BellLikeInit(a, b)
    else:
        stray = TWO_KEYS & set(raw)
        if stray:
            raise ParseError(f"keys {sorted(stray)} need a two-qubit mode", key=sorted(stray)[0])
        params = validate_params(
            SiteParams(
                kappa=rate("kappa"),
                j_coupling=rate("j", 0.0),
                gamma1=gamma1,
                gamma2=rate("gamma2", 0.0),
                detuning=rate("delta", 0.0),
                omega=rate("omega", 0.0),
            )
        )
        r = 1 / math.sqrt(2)
        a, b = _init_weights(raw, (r, r))
        init = PureQubitInit(a, b)

    t_end = _number(raw, "t_end", DEFAULT_T_END) * (scale or 1.0)
    n = _number(raw, "n", DEFAULT_N, kind=int)
    grid = TimeGrid.span(t_end, n)
    backend = raw.get("backend", "analytic")
    if backend not in BACKENDS:
        raise ParseError(f"backend must be one of {BACKENDS}", key="backend")
    fmt = raw.get("format", "csv")
    if fmt not in FORMATS:
        raise ParseError(f"format must be one of {FORMATS}", key="format")

    vary = values = None
    if mode == "sweep":
        if "vary" not in raw or "values" not in raw:
            raise ValidationError("sweep needs 'vary' and 'values'")
        vary = str(raw["vary"])
        values = _value_list(raw["values"])
    elif SWEEP_KEYS & set(raw):
        raise ParseError("sweep keys given outside sweep mode", key=sorted(SWEEP_KEYS & set(raw))[0])

    return RunConfig(
        mode=mode,
        params=params,
        init=init,
        grid=grid,
        backend=backend,
        output_path=None if raw.get("out") is None else str(raw["out"]),
        format=fmt,
        vary=vary,
        values=values,
        observable=observable if mode == "sweep" else None,
        gamma1_mhz=scale,
    )


def _value_list(value) -> tuple[float, ...]:
    if isinstance(value, str):
        value = [v for v in value.replace("[", "").replace("]", "").split(",") if v.strip()]
    if not isinstance(value, (list, tuple)) or not value:
        raise ParseError("values must be a nonempty list", key="values")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ParseError(f"values must be numbers, got {value!r}", key="values") from None


def load_mapping(text: str) -> dict:
    """Parse config text (JSON, YAML flow mapping, or ``key: value`` lines)."""
    if not text or not text.strip():
        raise ParseError("empty configuration")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(str(getattr(exc, "problem", exc)), line=None if mark is None else mark.line + 1) from None
    if isinstance(raw, Mapping) and isinstance(raw.get("meta"), Mapping) and "config" in raw["meta"]:
        raw = raw["meta"]["config"]
    if not isinstance(raw, Mapping):
        raise ParseError("configuration must be a mapping of keys to values")
    return dict(raw)


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text.

    An emitted JSON result file is also accepted: its ``meta.config`` block
    is used, so every JSON output can be rerun as a config.
    """
    return config_from_mapping(load_mapping(text))


def _jsonable(x):
    if isinstance(x, (complex, np.complexfloating)):
        return _jsonable(x.real) if x.imag == 0 else str(complex(x))
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def config_to_mapping(cfg: RunConfig) -> dict:
    """Flat, fully explicit mapping; ``config_from_mapping`` inverts it."""
    out: dict[str, Any] = {"mode": cfg.mode, "format": cfg.format}
    if cfg.mode == "reproduce":
        out.update(preset=cfg.preset, out_dir=cfg.out_dir)
        return out
    if cfg.two_site:
        a, b = cfg.params.site_a, cfg.params.site_b
        out.update(
            gamma1=a.gamma1, omega=a.omega,
            kappa_a=a.kappa, kappa_b=b.kappa, j_a=a.j_coupling, j_b=b.j_coupling,
            gamma2_a=a.gamma2, gamma2_b=b.gamma2, delta_a=a.detuning, delta_b=b.detuning,
        )
    else:
        p = cfg.params
        out.update(gamma1=p.gamma1, omega=p.omega, kappa=p.kappa, j=p.j_coupling,
                   gamma2=p.gamma2, delta=p.detuning)
    out.update(alpha=_jsonable(cfg.init.alpha), beta=_jsonable(cfg.init.beta),
               t_end=cfg.grid.t_end, n=cfg.grid.n_points, backend=cfg.backend)
    if cfg.output_path is not None:
        out["out"] = cfg.output_path
    if cfg.mode == "sweep":
        out.update(vary=cfg.vary, values=list(cfg.values), observable=cfg.observable)
    return {k: _jsonable(v) for k, v in out.items()}


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_mapping(cfg), indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True, eq=False)
class ResultTable:
    """Columns of equal length plus a metadata block."""

    columns: Sequence[str]
    rows: Any
    meta: dict

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValidationError("row width does not match header")


def make_meta(cfg: RunConfig | None = None, preset: str | None = None, **extra) -> dict:
    meta = {"version": __version__, "kernel": _ode.KERNEL, "preset": preset}
    if cfg is not None:
        meta.update(mode=cfg.mode, backend=cfg.backend, config=config_to_mapping(cfg))
        if cfg.gamma1_mhz is not None:
            meta["gamma1_mhz"] = cfg.gamma1_mhz
    meta.update({k: _jsonable(v) for k, v in extra.items()})
    return meta


def format_real(x) -> str:
    if x is None:
        return "nan"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_cell(x):
    if x is None or isinstance(x, str):
        return x
    x = float(x)
    return x if math.isfinite(x) else format_real(x)


def csv_text(table: ResultTable) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(c if isinstance(c, str) else format_real(c) for c in row))
    return "\n".join(lines) + "\n"


def json_text(table: ResultTable) -> str:
    doc = {
        "columns": list(table.columns),
        "meta": table.meta,
        "rows": [[_json_cell(c) for c in row] for row in table.rows],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def meta_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def emit(table: ResultTable, format: str, path) -> list[Path]:
    """Write ``table`` to ``path``. CSV gets a ``<name>.meta.json`` sidecar.

    Raises
    ------
    OSError
        On any filesystem failure.
    """
    if format not in FORMATS:
        raise ValidationError(f"format must be one of {FORMATS}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if format == "json":
        _write(path, json_text(table))
        return [path]
    _write(path, csv_text(table))
    side = meta_path(path)
    _write(side, json.dumps(table.meta, indent=2, sort_keys=True) + "\n")
    return [path, side]


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


__all__ = [
    "RunConfig",
    "ResultTable",
    "CoupledCavError",
    "parse_config",
    "config_from_mapping",
    "dump_config",
    "emit",
    "make_meta",
]
