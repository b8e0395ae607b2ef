"""Pure-Python Dormand-Prince 5(4) integrator for y' = M y.

Reference twin of the compiled kernel in ``_ode_ext.pyx``; both must
produce the same steps to rounding.
"""

import numpy as np

from .errors import StepSizeUnderflow

# Dormand-Prince 5(4) tableau
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


def initial_step(M, span, rtol):
    scale = max(np.abs(M).sum(axis=1).max(), 1e-12)
    return min(span, 0.1 * rtol ** 0.2 / scale) if span > 0 else 0.0


def integrate_linear(M, y0, times, rtol=1e-10, atol=1e-12, max_steps=10_000_000):
    """Integrate ``y' = M y`` from ``y(times[0]) = y0``; return samples at ``times``.

    Parameters
    ----------
    M : (n, n) complex array
    y0 : (n,) complex array
    times : (m,) nondecreasing float array
    rtol, atol : float
        Local error control on each component.

    Returns
    -------
    (m, n) complex array
    """
    M = np.ascontiguousarray(M, dtype=np.complex128)
    y = np.array(y0, dtype=np.complex128)
    times = np.asarray(times, dtype=np.float64)
    out = np.empty((times.size, y.size), dtype=np.complex128)
    if times.size == 0:
        return out
    t = float(times[0])
    out[0] = y
    h = initial_step(M, float(times[-1] - t), rtol)
    k1 = M @ y
    n = y.size
    steps = 0
    for i in range(1, times.size):
        target = float(times[i])
        while t < target:
            h_try = min(h, target - t)
            clamped = h_try < h
            k2 = M @ (y + h_try * (A21 * k1))
            k3 = M @ (y + h_try * (A31 * k1 + A32 * k2))
            k4 = M @ (y + h_try * (A41 * k1 + A42 * k2 + A43 * k3))
            k5 = M @ (y + h_try * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
            k6 = M @ (y + h_try * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
            y_new = y + h_try * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
            k7 = M @ y_new
            err_vec = h_try * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = np.sqrt(np.sum(np.abs(err_vec / scale) ** 2) / n)
            if err <= 1.0:
                if err == 0.0:
                    factor = MAX_FACTOR
                else:
                    factor = min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err ** -0.2))
                t = target if clamped else t + h_try
                y = y_new
                k1 = k7
                h = max(h, h_try * factor) if clamped else h_try * factor
            else:
                h = h_try * max(MIN_FACTOR, SAFETY * err ** -0.2)
                if h < 1e-14 * max(1.0, abs(t)):
                    raise StepSizeUnderflow(f"step size underflow at t={t}")
            steps += 1
            if steps > max_steps:
                raise StepSizeUnderflow(f"exceeded {max_steps} steps before t={target}")
        out[i] = y
    return out
