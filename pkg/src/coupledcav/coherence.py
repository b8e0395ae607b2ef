"""Single-qubit reduced dynamics and the l1 coherence measure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import PropagatorSample, propagator
from .core import PureQubitInit, QubitState, SiteParams, TimeGrid

TRAP_MIN_T_END = 200.0
TRAP_REL_CHANGE = 1e-3
TAIL_FRACTION = 0.9


def evolve_qubit(rho0: QubitState, prop: PropagatorSample) -> QubitState:
    """Apply the amplitude-damping-type map: populations scale by ``u``, coherence by ``z``."""
    return QubitState(evolve_qubit_array(rho0.rho, prop.z)[()])


def evolve_qubit_array(rho0: np.ndarray, z) -> np.ndarray:
    """Vectorized map over an array of ``z`` values; returns shape ``z.shape + (2, 2)``."""
    z = np.asarray(z, dtype=complex)
    u = np.abs(z) ** 2
    out = np.empty(z.shape + (2, 2), dtype=complex)
    p11 = u * rho0[0, 0].real
    out[..., 0, 0] = p11
    out[..., 0, 1] = z * rho0[0, 1]
    out[..., 1, 0] = np.conj(z) * rho0[1, 0]
    out[..., 1, 1] = 1.0 - p11
    return out


def coherence(rho: QubitState | np.ndarray):
    """Sum of moduli of the off-diagonal elements (``2 |rho_10|`` for a qubit)."""
    m = rho.rho if isinstance(rho, QubitState) else np.asarray(rho)
    return np.abs(m[..., 0, 1]) + np.abs(m[..., 1, 0])


@dataclass(frozen=True, eq=False)
class CoherenceTrace:
    grid: TimeGrid
    values: np.ndarray
    backend: str = "analytic"

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    def is_trapped(self) -> bool:
        return is_stationary_tail(self.times, self.values, min_t_end=TRAP_MIN_T_END)


def coherence_trace(
    p: SiteParams, init: PureQubitInit, grid: TimeGrid, backend: str = "analytic"
) -> CoherenceTrace:
    prop = propagator(p, grid.times, backend)
    values = 2 * abs(init.alpha * init.beta) * np.abs(prop.z)
    return CoherenceTrace(grid, values, prop.backend)


def asymptotic_coherence(init: PureQubitInit, p: SiteParams) -> float | None:
    """Long-time coherence ``2|alpha beta| J^2 / (J^2 + kappa^2)``.

    Returns None (no trapping) unless the second cavity is perfect and the
    qubit is resonant.
    """
    if not p.is_trapping:
        return None
    j2, k2 = p.j_coupling**2, p.kappa**2
    if j2 + k2 == 0:
        # free qubit: nothing to decay into
        return 2 * abs(init.alpha * init.beta)
    return 2 * abs(init.alpha * init.beta) * j2 / (j2 + k2)


def is_stationary_tail(
    times: np.ndarray,
    values: np.ndarray,
    rel_change: float = TRAP_REL_CHANGE,
    min_t_end: float = 0.0,
    fraction: float = TAIL_FRACTION,
) -> bool:
    """Relative spread of ``values`` over ``[fraction * t_end, t_end]`` is below ``rel_change``."""
    t_end = times[-1]
    if t_end < min_t_end:
        return False
    tail = values[times >= fraction * t_end]
    scale = np.max(np.abs(tail))
    if scale == 0:
        return True
    return bool((tail.max() - tail.min()) / scale < rel_change)
