"""Compare the compiled and pure-Python amplitude integrators.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--t-end T]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from coupledcav import _ode
from coupledcav.amplitudes import generator
from coupledcav.core import SiteParams

CASES = {
    "weak, lossy C2": SiteParams(0.24, 1.0, 1.0, 0.5),
    "strong, perfect C2": SiteParams(2.0, 3.0, 1.0, 0.0),
    "detuned": SiteParams(0.4, 1.0, 1.0, 0.2, 1.0),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--t-end", type=float, default=50.0)
    ap.add_argument("--n", type=int, default=501)
    args = ap.parse_args(argv)

    times = np.linspace(0.0, args.t_end, args.n)
    y0 = np.array([1, 0, 0], dtype=complex)
    print(f"active kernel: {_ode.KERNEL}")
    if _ode.KERNEL != "compiled":
        print("compiled kernel unavailable or disabled; timing the Python kernel only")
    print(f"{'case':<20} {'python ms':>10} {'compiled ms':>12} {'speedup':>8} {'max diff':>10}")
    for name, p in CASES.items():
        m = generator(p)
        py = min(timeit.repeat(lambda: _ode.integrate_linear_py(m, y0, times), number=1, repeat=args.repeat))
        if _ode.KERNEL == "compiled":
            fast = min(timeit.repeat(lambda: _ode.integrate_linear(m, y0, times), number=1, repeat=args.repeat))
            diff = np.max(np.abs(_ode.integrate_linear(m, y0, times) - _ode.integrate_linear_py(m, y0, times)))
            print(f"{name:<20} {py * 1e3:>10.2f} {fast * 1e3:>12.3f} {py / fast:>8.0f} {diff:>10.1e}")
        else:
            print(f"{name:<20} {py * 1e3:>10.2f} {'-':>12} {'-':>8} {'-':>10}")


if __name__ == "__main__":
    main()
