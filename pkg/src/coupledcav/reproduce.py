"""Write the data files behind each named figure/table preset."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .coherence import coherence_trace
from .core import PureQubitInit, TimeGrid
from .io import ResultTable, emit, make_meta
from .presets import Preset, get_preset, j_label, site
from .sweeps import SweepSpec, run_sweep, table1, table1_columns, table1_records
from .twoqubit import BellLikeInit, TwoSiteParams, concurrence_trace, esd_analysis


def _init(alpha: float) -> PureQubitInit:
    return PureQubitInit(alpha, float(np.sqrt(1 - alpha * alpha)))


def _trace_table(times, values, time_col, value_col, meta) -> ResultTable:
    return ResultTable([time_col, value_col], np.column_stack([times, values]), meta)


def _long_table(label, keys, times, matrix, time_col, value_col, meta) -> ResultTable:
    k = np.repeat(np.asarray(keys, float), len(times))
    t = np.tile(times, len(keys))
    return ResultTable([label, time_col, value_col], np.column_stack([k, t, np.ravel(matrix)]), meta)


def _coherence_curves(pr: Preset):
    b = pr.base
    panels = pr.panels or {"": {}}
    for tag, panel in panels.items():
        fixed = {**b, **panel}
        for v in pr.curves:
            if b["vary"] == "j_coupling":
                p, label = site(fixed["kappa"], v, fixed["gamma2"]), f"J{v:g}"
            else:
                p, label = site(fixed["kappa"], fixed["j_coupling"], fixed["gamma2"], v), f"delta{v:g}"
            tr = coherence_trace(p, _init(b["alpha"]), pr.grid)
            meta = dict(params=p.__dict__, alpha=b["alpha"], curve=label, panel=tag or None)
            yield f"{pr.name}{tag}_{label}", _trace_table(pr.grid.times, tr.values, "gamma1_t", "coherence", meta)


def _blp_vs_j(pr: Preset):
    js = pr.base["j_values"]
    for kappa in pr.curves:
        spec = SweepSpec("j_coupling", js, site(kappa, 0.0, pr.base["gamma2"]), "blp", pr.grid)
        rows = run_sweep(spec)
        values = [np.nan if r.result is None else r.result for r in rows]
        meta = dict(kappa=kappa, gamma2=pr.base["gamma2"], grid=pr.grid.__dict__,
                    errors=[r.error for r in rows if not r.ok])
        yield f"{pr.name}_kappa{kappa:g}", ResultTable(["J_over_gamma1", "N"], np.column_stack([js, values]), meta)


def _coherence_map(pr: Preset):
    b = pr.base
    for tag, panel in pr.panels.items():
        p = site(panel["kappa"], panel["j_coupling"], panel["gamma2"])
        spec = SweepSpec(b["vary"], b["values"], p, "coherence", pr.grid, _init(b["alpha"]))
        mat = np.array([r.result for r in run_sweep(spec)])
        meta = dict(params=p.__dict__, alpha=b["alpha"], vary=b["vary"])
        yield f"{pr.name}{tag}", _long_table("delta_over_gamma1", b["values"], pr.grid.times, mat,
                                             "gamma1_t", "coherence", meta)


def _concurrence_curves(pr: Preset):
    b = pr.base
    init = BellLikeInit.from_alpha(b["alpha"])
    for j_a, j_b in pr.curves:
        params = TwoSiteParams.symmetric(b["kappa_a"], b["kappa_b"], j_a, j_b, b["gamma2"])
        tr = concurrence_trace(params, init, pr.grid)
        meta = dict(site_a=params.site_a.__dict__, site_b=params.site_b.__dict__, alpha=b["alpha"])
        yield f"{pr.name}_{j_label(j_a, j_b)}", _trace_table(pr.grid.times, tr.values, "gamma_t", "concurrence", meta)


def _concurrence_map(pr: Preset):
    b = pr.base
    alpha = b.get("alpha", 1 / np.sqrt(2))
    params = TwoSiteParams.symmetric(b["kappa_a"], b["kappa_b"], b.get("j_a", 0.0), b.get("j_b", 0.0), b["gamma2"])
    spec = SweepSpec(b["vary"], b["values"], params, "concurrence", pr.grid, BellLikeInit.from_alpha(alpha))
    mat = np.array([r.result for r in run_sweep(spec)])
    label = "alpha" if b["vary"] == "alpha" else "J_over_gamma"
    meta = dict(site_a=params.site_a.__dict__, site_b=params.site_b.__dict__, vary=b["vary"])
    if b["vary"] != "alpha":
        meta["alpha"] = alpha
    yield pr.name, _long_table(label, b["values"], pr.grid.times, mat, "gamma_t", "concurrence", meta)


def _table1(pr: Preset):
    b = pr.base
    rows = table1(b["gamma2_ratios"], b["coupling_pairs"], (b["kappa_a"], b["kappa_b"]), b["alpha"])
    baseline = esd_analysis(TwoSiteParams.symmetric(b["kappa_a"], b["kappa_b"], 0.0, 0.0, 0.0),
                            BellLikeInit.from_alpha(b["alpha"]), 20.0)
    meta = dict(kappas=[b["kappa_a"], b["kappa_b"]], alpha=b["alpha"], threshold=1e-6,
                tbar_gamma=baseline.t_star, horizons=[r.horizon for r in rows])
    yield pr.name, ResultTable(table1_columns(), table1_records(rows), meta)


_BUILDERS = {
    "coherence_curves": _coherence_curves,
    "blp_vs_j": _blp_vs_j,
    "coherence_map": _coherence_map,
    "concurrence_curves": _concurrence_curves,
    "concurrence_map": _concurrence_map,
    "table1": _table1,
}


def preset_tables(name: str):
    """Yield ``(file_stem, ResultTable)`` for every data file of preset ``name``."""
    pr = get_preset(name)
    for stem, table in _BUILDERS[pr.kind](pr):
        table.meta.update(make_meta(preset=pr.name, preset_version=pr.version, description=pr.description))
        yield stem, table


def reproduce(name: str, out_dir=".", format: str = "csv") -> list[Path]:
    out_dir = Path(out_dir)
    written = []
    for stem, table in preset_tables(name):
        written += emit(table, format, out_dir / f"{stem}.{format}")
    return written
