# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) integrator for y' = M y.

Step-for-step mirror of ``_ode_py.integrate_linear``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, fabs
from libc.stdlib cimport malloc, free

from .errors import StepSizeUnderflow

cnp.import_array()

cdef extern from "complex.h":
    double cabs(double complex)

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920
cdef double E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 5.0


cdef inline void matvec(const double complex[:, ::1] M, const double complex* x,
                        double complex* out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t r, c
    cdef double complex acc
    for r in range(n):
        acc = 0
        for c in range(n):
            acc = acc + M[r, c] * x[c]
        out[r] = acc


def integrate_linear(M, y0, times, double rtol=1e-10, double atol=1e-12,
                     long max_steps=10_000_000):
    """Integrate ``y' = M y`` from ``y(times[0]) = y0``; return samples at ``times``."""
    cdef const double complex[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.complex128)
    cdef double complex[::1] y0v = np.array(y0, dtype=np.complex128)
    cdef const double[::1] tv = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = y0v.shape[0]
    cdef Py_ssize_t m = tv.shape[0]
    out_arr = np.empty((m, n), dtype=np.complex128)
    if m == 0:
        return out_arr
    cdef double complex[:, ::1] out = out_arr

    cdef double complex* buf = <double complex*> malloc(10 * n * sizeof(double complex))
    if buf == NULL:
        raise MemoryError()
    cdef double complex* y = buf
    cdef double complex* ynew = buf + n
    cdef double complex* tmp = buf + 2 * n
    cdef double complex* k1 = buf + 3 * n
    cdef double complex* k2 = buf + 4 * n
    cdef double complex* k3 = buf + 5 * n
    cdef double complex* k4 = buf + 6 * n
    cdef double complex* k5 = buf + 7 * n
    cdef double complex* k6 = buf + 8 * n
    cdef double complex* k7 = buf + 9 * n
    cdef double complex* swap
    cdef Py_ssize_t i, j
    cdef double t = tv[0], target, h, h_try, err, sc, a, b, factor
    cdef bint clamped
    cdef long steps = 0
    cdef double complex ev

    try:
        for j in range(n):
            y[j] = y0v[j]
            out[0, j] = y0v[j]
        h = _initial_step(Mv, n, tv[m - 1] - t, rtol)
        matvec(Mv, y, k1, n)
        for i in range(1, m):
            target = tv[i]
            while t < target:
                h_try = h if h < target - t else target - t
                clamped = h_try < h
                for j in range(n):
                    tmp[j] = y[j] + h_try * (A21 * k1[j])
                matvec(Mv, tmp, k2, n)
                for j in range(n):
                    tmp[j] = y[j] + h_try * (A31 * k1[j] + A32 * k2[j])
                matvec(Mv, tmp, k3, n)
                for j in range(n):
                    tmp[j] = y[j] + h_try * (A41 * k1[j] + A42 * k2[j] + A43 * k3[j])
                matvec(Mv, tmp, k4, n)
                for j in range(n):
                    tmp[j] = y[j] + h_try * (A51 * k1[j] + A52 * k2[j] + A53 * k3[j] + A54 * k4[j])
                matvec(Mv, tmp, k5, n)
                for j in range(n):
                    tmp[j] = y[j] + h_try * (A61 * k1[j] + A62 * k2[j] + A63 * k3[j]
                                             + A64 * k4[j] + A65 * k5[j])
                matvec(Mv, tmp, k6, n)
                for j in range(n):
                    ynew[j] = y[j] + h_try * (B1 * k1[j] + B3 * k3[j] + B4 * k4[j]
                                              + B5 * k5[j] + B6 * k6[j])
                matvec(Mv, ynew, k7, n)
                err = 0.0
                for j in range(n):
                    ev = h_try * (E1 * k1[j] + E3 * k3[j] + E4 * k4[j] + E5 * k5[j]
                                  + E6 * k6[j] + E7 * k7[j])
                    a = cabs(y[j])
                    b = cabs(ynew[j])
                    sc = atol + rtol * (a if a > b else b)
                    a = cabs(ev) / sc
                    err += a * a
                err = sqrt(err / n)
                if err <= 1.0:
                    if err == 0.0:
                        factor = MAX_FACTOR
                    else:
                        factor = SAFETY * pow(err, -0.2)
                        if factor < MIN_FACTOR:
                            factor = MIN_FACTOR
                        if factor > MAX_FACTOR:
                            factor = MAX_FACTOR
                    if clamped:
                        t = target
                        if h_try * factor > h:
                            h = h_try * factor
                    else:
                        t = t + h_try
                        h = h_try * factor
                    swap = y
                    y = ynew
                    ynew = swap
                    swap = k1
                    k1 = k7
                    k7 = swap
                else:
                    factor = SAFETY * pow(err, -0.2)
                    if factor < MIN_FACTOR:
                        factor = MIN_FACTOR
                    h = h_try * factor
                    if h < 1e-14 * (fabs(t) if fabs(t) > 1.0 else 1.0):
                        raise StepSizeUnderflow(f"step size underflow at t={t}")
                steps += 1
                if steps > max_steps:
                    raise StepSizeUnderflow(f"exceeded {max_steps} steps before t={target}")
            for j in range(n):
                out[i, j] = y[j]
    finally:
        free(buf)
    return out_arr


cdef double _initial_step(const double complex[:, ::1] M, Py_ssize_t n, double span,
                          double rtol):
    cdef double scale = 0.0, row
    cdef Py_ssize_t r, c
    if span <= 0:
        return 0.0
    for r in range(n):
        row = 0.0
        for c in range(n):
            row += cabs(M[r, c])
        if row > scale:
            scale = row
    if scale < 1e-12:
        scale = 1e-12
    row = 0.1 * pow(rtol, 0.2) / scale
    return span if span < row else row
