"""Parameter sweeps and the entanglement-lifetime table."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Any, Sequence

import numpy as np

from .coherence import coherence_trace
from .core import PureQubitInit, SiteParams, TimeGrid, validate_params
from .errors import CoupledCavError, HorizonTooShort, ValidationError
from .nonmarkov import blp_measure
from .twoqubit import (
    BellLikeInit,
    TwoSiteParams,
    concurrence_trace,
    esd_analysis,
    trapped_concurrence,
)

SITE_OBSERVABLES = ("coherence", "blp")
TWO_SITE_OBSERVABLES = ("concurrence", "esd_time", "trapped")
OBSERVABLES = SITE_OBSERVABLES + TWO_SITE_OBSERVABLES

# names that address both sites at once in a two-site sweep
_BOTH = {"kappa": "kappa", "j": "j_coupling", "j_coupling": "j_coupling",
         "gamma2": "gamma2", "detuning": "detuning", "delta": "detuning"}
_SITE_FIELDS = {f.name for f in fields(SiteParams)}

TABLE1_HORIZON = 2e4
TABLE1_HORIZON_CAP = 2e5
SENSITIVITY_EPS = (1e-4, 1e-8)
GAMMA_BAND_MHZ = (1.0, 10.0)


@dataclass(frozen=True)
class SweepSpec:
    varying: str
    values: Sequence[float]
    fixed: SiteParams | TwoSiteParams
    observable: str
    grid: TimeGrid
    init: PureQubitInit | BellLikeInit | None = None
    backend: str = "analytic"

    def __post_init__(self):
        if not len(self.values):
            raise ValidationError("sweep needs at least one value")
        if self.observable not in OBSERVABLES:
            raise ValidationError(f"observable must be one of {OBSERVABLES}")
        two_site = isinstance(self.fixed, TwoSiteParams)
        if two_site != (self.observable in TWO_SITE_OBSERVABLES):
            raise ValidationError(f"observable {self.observable!r} does not fit {type(self.fixed).__name__}")
        apply_value(self, self.values[0])


@dataclass(frozen=True, eq=False)
class SweepRow:
    value: float
    result: Any = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def apply_value(spec: SweepSpec, value: float):
    """Return ``(params, init)`` with the varying parameter set to ``value``."""
    name, fixed, init = spec.varying, spec.fixed, spec.init
    if name == "alpha":
        if isinstance(fixed, TwoSiteParams):
            return fixed, BellLikeInit.from_alpha(value)
        return fixed, PureQubitInit(value, math.sqrt(1 - value * value))
    if isinstance(fixed, SiteParams):
        if name not in _SITE_FIELDS:
            raise ValidationError(f"unknown site parameter {name!r}")
        return validate_params(replace(fixed, **{name: value})), init
    if name.endswith(("_a", "_b")) and _BOTH.get(name[:-2]):
        attr, which = _BOTH[name[:-2]], name[-1]
        a, b = fixed.site_a, fixed.site_b
        if which == "a":
            a = replace(a, **{attr: value})
        else:
            b = replace(b, **{attr: value})
        return TwoSiteParams(a, b), init
    if name in _BOTH:
        attr = _BOTH[name]
        return TwoSiteParams(replace(fixed.site_a, **{attr: value}), replace(fixed.site_b, **{attr: value})), init
    raise ValidationError(f"unknown two-site parameter {name!r}")


def _observe(spec: SweepSpec, value: float) -> SweepRow:
    try:
        params, init = apply_value(spec, value)
        obs = spec.observable
        if obs == "coherence":
            result = coherence_trace(params, init, spec.grid, spec.backend).values
        elif obs == "blp":
            result = blp_measure(params, spec.grid, backend=spec.backend).n_value
        elif obs == "concurrence":
            result = concurrence_trace(params, init, spec.grid, spec.backend).values
        elif obs == "esd_time":
            result = esd_analysis(params, init, spec.grid.t_end, backend=spec.backend).t_star
        else:
            result = trapped_concurrence(params, init)
        return SweepRow(float(value), result)
    except CoupledCavError as exc:
        return SweepRow(float(value), None, f"{type(exc).__name__}: {exc}")


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """One row per value, in input order. Failed rows carry ``error`` instead of aborting."""
    if workers == 1 or len(spec.values) == 1:
        return [_observe(spec, v) for v in spec.values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: _observe(spec, v), spec.values))


@dataclass(frozen=True)
class Table1Row:
    gamma2_ratio: float
    j_a: float
    j_b: float
    t_star_scaled: float
    t_star_range: tuple[float, float]
    horizon: float
    sensitivity: dict

    @property
    def t_star_us_low(self) -> float:
        return self.t_star_range[0]

    @property
    def t_star_us_high(self) -> float:
        return self.t_star_range[1]


def lifetime_range_us(t_star_scaled: float, band_mhz=GAMMA_BAND_MHZ) -> tuple[float, float]:
    """Physical lifetime in microseconds for ``gamma`` spanning ``band_mhz``."""
    lo, hi = band_mhz
    return (t_star_scaled / hi, t_star_scaled / lo)


def _esd_with_extension(params, init, horizon, cap, eps):
    while True:
        try:
            return esd_analysis(params, init, horizon, eps=eps)
        except HorizonTooShort:
            if horizon >= cap:
                raise
            horizon = min(2 * horizon, cap)


def table1(
    gamma2_ratios: Sequence[float] = (1e-2, 1e-3),
    coupling_pairs: Sequence[tuple[float, float]] = ((0.5, 0.5), (0.5, 1.0)),
    kappas: tuple[float, float] = (0.2, 0.3),
    alpha: float = math.sqrt(1 / 3),
    horizon: float = TABLE1_HORIZON,
    cap: float = TABLE1_HORIZON_CAP,
    eps: float = 1e-6,
) -> list[Table1Row]:
    """Entanglement lifetimes ``t* gamma`` with lossy secondary cavities.

    The horizon doubles from ``horizon`` up to ``cap`` until the concurrence
    has visibly settled; ``sensitivity`` reports ``t*`` at other thresholds.
    """
    init = BellLikeInit.from_alpha(alpha)
    rows = []
    for g2 in gamma2_ratios:
        for j_a, j_b in coupling_pairs:
            params = TwoSiteParams.symmetric(kappas[0], kappas[1], j_a, j_b, g2)
            res = _esd_with_extension(params, init, horizon, cap, eps)
            sens = {
                e: float(esd_analysis(params, init, res.horizon, eps=e).t_star) for e in SENSITIVITY_EPS
            }
            t_star = float(res.t_star)
            rows.append(Table1Row(g2, j_a, j_b, t_star, lifetime_range_us(t_star), res.horizon, sens))
    return rows


def table1_columns() -> list[str]:
    return ["gamma2_ratio", "jA", "jB", "tstar_gamma", "tstar_us_low", "tstar_us_high"] + [
        f"tstar_gamma_eps{e:.0e}" for e in SENSITIVITY_EPS
    ]


def table1_records(rows: Sequence[Table1Row]) -> list[list[float]]:
    return [
        [r.gamma2_ratio, r.j_a, r.j_b, r.t_star_scaled, r.t_star_us_low, r.t_star_us_high]
        + [r.sensitivity[e] for e in SENSITIVITY_EPS]
        for r in rows
    ]


def detuning_argmin(p: SiteParams, deltas: Sequence[float], t: float, init: PureQubitInit) -> float:
    """Detuning in ``deltas`` giving the lowest coherence at time ``t``."""
    grid = TimeGrid(0.0, t, 2)
    vals = [coherence_trace(replace(p, detuning=d), init, grid).values[-1] for d in deltas]
    return float(deltas[int(np.argmin(vals))])
