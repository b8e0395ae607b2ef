"""Closed-form propagator by partial fractions of the amplitude Laplace transform.

The qubit amplitude transforms to ``N(x) / G(x)`` with ``x = s + i*omega``::

    N(x) = 4 J^2 + (2x + g1)(2x + g2)
    G(x) = 2 kappa^2 (2x + g2) + (x + i delta) N(x)

``G`` is a cubic, so ``z(t) = sum_k r_k exp(s_k t)`` over its three simple
roots, with ``r_k = N(x_k) / G'(x_k)``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .core import SiteParams, validate_params
from .errors import RepeatedRoots

REPEATED_ROOT_TOL = 1e-8
_OMEGA3 = cmath.exp(2j * cmath.pi / 3)


def solve_cubic(a: complex, b: complex, c: complex, polish: int = 2) -> np.ndarray:
    """Roots of the monic cubic ``x^3 + a x^2 + b x + c`` (complex coefficients).

    Cardano's formula in complex arithmetic, taking the larger-modulus branch
    of the resolvent to avoid cancellation, then ``polish`` Newton steps.
    """
    a, b, c = complex(a), complex(b), complex(c)
    shift = a / 3
    p = b - a * a / 3
    q = 2 * a**3 / 27 - a * b / 3 + c
    disc = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    w1 = -q / 2 + disc
    w2 = -q / 2 - disc
    w = w1 if abs(w1) >= abs(w2) else w2
    if w == 0:
        ys = [0j, 0j, 0j]
    else:
        u = w ** (1 / 3)
        ys = []
        for k in range(3):
            uk = u * _OMEGA3**k
            ys.append(uk - p / (3 * uk))
    roots = []
    for y in ys:
        x = y - shift
        for _ in range(polish):
            f = ((x + a) * x + b) * x + c
            df = (3 * x + 2 * a) * x + b
            if df == 0:
                break
            x = x - f / df
        roots.append(x)
    return np.array(roots, dtype=complex)


def characteristic_coefficients(p: SiteParams) -> tuple[complex, complex, complex]:
    """Monic coefficients of ``G(x) / 4`` in the frame rotating at ``omega``."""
    k2 = p.kappa**2
    j2 = p.j_coupling**2
    g1, g2, d = p.gamma1, p.gamma2, p.detuning
    a = (2 * (g1 + g2) + 4j * d) / 4
    b = (g1 * g2 + 4 * j2 + 2j * d * (g1 + g2) + 4 * k2) / 4
    c = (1j * d * (g1 * g2 + 4 * j2) + 2 * k2 * g2) / 4
    return a, b, c


def numerator(p: SiteParams, x):
    return 4 * p.j_coupling**2 + (2 * x + p.gamma1) * (2 * x + p.gamma2)


@dataclass(frozen=True, eq=False)
class LaplacePoles:
    """Poles ``s_k`` (lab frame, including ``-i omega``) and residues of the propagator."""

    poles: np.ndarray
    residues: np.ndarray

    def z(self, t):
        """Evaluate ``sum_k r_k exp(s_k t)`` at scalar or array ``t``."""
        t = np.asarray(t, dtype=float)
        out = np.exp(np.multiply.outer(t, self.poles)) @ self.residues
        # residues sum to 1 only to rounding; pin the initial condition
        out = np.where(t == 0, 1.0 + 0j, out)
        return out if t.ndim else complex(out)

    def derivative(self, t, order: int = 1):
        """``d^order z / dt^order`` at ``t``."""
        t = np.asarray(t, dtype=float)
        out = np.exp(np.multiply.outer(t, self.poles)) @ (self.residues * self.poles**order)
        return out if t.ndim else complex(out)

    @property
    def min_separation(self) -> float:
        s = self.poles
        return float(min(abs(s[0] - s[1]), abs(s[0] - s[2]), abs(s[1] - s[2])))


def laplace_poles(p: SiteParams) -> LaplacePoles:
    """Roots of ``G`` and partial-fraction residues of ``N/G``.

    Raises
    ------
    RepeatedRoots
        If two roots are closer than ``1e-8 * gamma1``; partial fractions are
        ill-conditioned there and callers should integrate instead.
    """
    validate_params(p)
    x = solve_cubic(*characteristic_coefficients(p))
    sep = min(abs(x[0] - x[1]), abs(x[0] - x[2]), abs(x[1] - x[2]))
    if sep < REPEATED_ROOT_TOL * p.gamma1:
        raise RepeatedRoots(f"roots {x} are separated by {sep:.3g}")
    # G'(x_k) = 4 * prod_{j != k} (x_k - x_j) for the monic factorization
    residues = np.empty(3, dtype=complex)
    for k in range(3):
        others = [x[j] for j in range(3) if j != k]
        residues[k] = numerator(p, x[k]) / (4 * (x[k] - others[0]) * (x[k] - others[1]))
    return LaplacePoles(poles=x - 1j * p.omega, residues=residues)


def amplitudes_analytic(p: SiteParams, t) -> np.ndarray:
    """All three amplitudes from the excited initial state, shape ``t.shape + (3,)``.

    ``c1`` and ``c2`` follow from the first two amplitude equations solved
    for the cavity amplitudes; each vanishes identically when its coupling
    is zero.
    """
    t = np.asarray(t, dtype=float)
    poles = laplace_poles(p)
    h = poles.z(t)
    out = np.zeros(t.shape + (3,), dtype=complex)
    out[..., 0] = h
    if p.kappa == 0:
        return out
    dh = poles.derivative(t, 1)
    c1 = (1j * dh - (p.omega + p.detuning) * h) / p.kappa
    out[..., 1] = c1
    if p.j_coupling == 0:
        return out
    dc1 = (1j * poles.derivative(t, 2) - (p.omega + p.detuning) * dh) / p.kappa
    out[..., 2] = (1j * dc1 - (p.omega - 0.5j * p.gamma1) * c1 - p.kappa * h) / p.j_coupling
    return out
