"""Command-line front end.

Every mode accepts ``--config FILE`` plus flags mirroring the config keys;
flags override file values, which override defaults.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .amplitudes import AmplitudeVector, evolve_ode, propagator
from .coherence import coherence_trace
from .errors import CoupledCavError, ParseError, SolverError, UnknownPreset, ValidationError
from .io import ResultTable, RunConfig, config_from_mapping, emit, load_mapping, make_meta
from .laplace import amplitudes_analytic
from .nonmarkov import blp_measure
from .presets import PRESETS
from .reproduce import reproduce
from .sweeps import SweepSpec, run_sweep
from .twoqubit import concurrence_trace

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

# (flag, config key, type, help)
_SITE_FLAGS = [
    ("--kappa", "kappa", float, "qubit-C1 coupling (both sites in two-qubit modes)"),
    ("--j", "j", float, "C1-C2 coupling (both sites in two-qubit modes)"),
    ("--gamma1", "gamma1", float, "C1 decay rate; the unit of all rates (default 1)"),
    ("--gamma2", "gamma2", float, "C2 decay rate (default 0)"),
    ("--delta", "delta", float, "qubit-cavity detuning (default 0)"),
    ("--omega", "omega", float, "cavity frequency (default 0; observables do not depend on it)"),
    ("--alpha", "alpha", str, "initial weight of |0> (|00> for two qubits)"),
    ("--beta", "beta", str, "initial weight of |1> (|11> for two qubits)"),
    ("--t-end", "t_end", float, "final time in units of 1/gamma1 (default 15)"),
    ("--n", "n", int, "number of time samples (default 1501)"),
    ("--backend", "backend", str, "analytic (default) or ode"),
    ("--out", "out", str, "output file (default: stdout)"),
    ("--format", "format", str, "csv (default) or json"),
]
_TWO_FLAGS = [
    (f"--{k.replace('_', '-')}", k, float, f"{k.split('_')[0]} of site {k[-1].upper()}")
    for k in ("kappa_a", "kappa_b", "j_a", "j_b", "gamma2_a", "gamma2_b", "delta_a", "delta_b")
]
_SWEEP_FLAGS = [
    ("--vary", "vary", str, "parameter to sweep (site field, or j/kappa/gamma2/j_a/... or alpha)"),
    ("--values", "values", str, "comma-separated values"),
    ("--observable", "observable", str, "coherence | blp | concurrence | esd_time | trapped"),
]

_MODE_HELP = {
    "simulate": "amplitudes (h, c1, c2) from the excited qubit state",
    "coherence": "single-qubit coherence trace",
    "nonmarkov": "BLP measure and trace distance of the optimal pair",
    "twoqubit": "two-qubit concurrence trace",
    "sweep": "scan one parameter",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupledcav",
        description=__doc__,
        epilog="Exit codes: 0 success, 2 parse/validation error, 3 solver error, 4 IO error.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode, help_ in _MODE_HELP.items():
        p = sub.add_parser(mode, help=help_, description=help_)
        p.add_argument("--config", type=Path, help="config file (JSON, YAML, or key: value lines)")
        flags = list(_SITE_FLAGS)
        if mode in ("twoqubit", "sweep"):
            flags += _TWO_FLAGS
        if mode == "sweep":
            flags += _SWEEP_FLAGS
        for flag, key, typ, h in flags:
            p.add_argument(flag, dest=key, type=typ, default=None, help=h)
    rp = sub.add_parser("reproduce", help="write data files for a figure/table preset")
    rp.add_argument("preset", help=f"one of: {', '.join(PRESETS)}")
    rp.add_argument("--out-dir", default=".", help="directory for the data files")
    rp.add_argument("--format", default="csv", choices=("csv", "json"))
    return parser


def _table_for(cfg: RunConfig) -> ResultTable:
    times = cfg.grid.times
    if cfg.mode == "simulate":
        if cfg.backend == "ode":
            data = evolve_ode(cfg.params, AmplitudeVector.excited(), cfg.grid).data
        else:
            data = amplitudes_analytic(cfg.params, times)
        cols = ["gamma1_t", "h_re", "h_im", "c1_re", "c1_im", "c2_re", "c2_im", "vacuum_population"]
        vac = 1 - np.sum(np.abs(data) ** 2, axis=1)
        rows = np.column_stack([times, data.real[:, 0], data.imag[:, 0], data.real[:, 1],
                                data.imag[:, 1], data.real[:, 2], data.imag[:, 2], vac])
        return ResultTable(cols, rows, make_meta(cfg))
    if cfg.mode == "coherence":
        tr = coherence_trace(cfg.params, cfg.init, cfg.grid, cfg.backend)
        return ResultTable(["gamma1_t", "coherence"], np.column_stack([times, tr.values]),
                           make_meta(cfg, backend_used=tr.backend))
    if cfg.mode == "nonmarkov":
        res = blp_measure(cfg.params, cfg.grid, backend=cfg.backend)
        theta = float(np.arccos(np.clip(2 * res.argmax_pair.rho1.rho[0, 0].real - 1, -1, 1)))
        return ResultTable(["gamma1_t", "trace_distance"], np.column_stack([times, res.d_trace]),
                           make_meta(cfg, N=res.n_value, argmax_theta=theta, markovian=res.is_markovian))
    if cfg.mode == "twoqubit":
        tr = concurrence_trace(cfg.params, cfg.init, cfg.grid, cfg.backend)
        return ResultTable(["gamma_t", "concurrence"], np.column_stack([times, tr.values]), make_meta(cfg))
    spec = SweepSpec(cfg.vary, cfg.values, cfg.params, cfg.observable, cfg.grid, cfg.init, cfg.backend)
    rows = run_sweep(spec)
    errors = {r.value: r.error for r in rows if not r.ok}
    if cfg.observable in ("coherence", "concurrence"):
        out = [[r.value, t, v] for r in rows if r.ok for t, v in zip(times, r.result)]
        cols = [cfg.vary, "gamma1_t", cfg.observable]
    else:
        out = [[r.value, r.result] for r in rows]
        cols = [cfg.vary, cfg.observable]
    return ResultTable(cols, out, make_meta(cfg, failed_rows=errors))


def run(cfg: RunConfig) -> ResultTable:
    return _table_for(cfg)


def _merge(args: argparse.Namespace) -> dict:
    raw = {}
    if args.config is not None:
        raw = load_mapping(args.config.read_text(encoding="utf-8"))
    for key, value in vars(args).items():
        if key in ("config", "mode") or value is None:
            continue
        raw[key] = value
    raw["mode"] = args.mode
    return raw


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.mode == "reproduce":
            for path in reproduce(args.preset, args.out_dir, args.format):
                print(path)
            return EXIT_OK
        cfg = config_from_mapping(_merge(args))
        table = run(cfg)
        if cfg.output_path is None:
            from .io import csv_text, json_text

            sys.stdout.write(json_text(table) if cfg.format == "json" else csv_text(table))
        else:
            emit(table, cfg.format, cfg.output_path)
        if cfg.mode == "nonmarkov":
            print(f"N = {table.meta['N']:.10g}", file=sys.stderr)
        return EXIT_OK
    except (ParseError, ValidationError, UnknownPreset) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CoupledCavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
