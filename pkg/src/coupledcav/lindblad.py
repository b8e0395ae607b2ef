"""Brute-force master-equation oracle for the amplitude solver.

Integrates the full Lindblad equation on the four states
{|100>, |010>, |001>, |000>} (qubit, C1, C2) with classical fixed-step RK4,
in the lab frame (``omega`` kept). Only meant for validation.
"""

from __future__ import annotations

import math

import numpy as np

from .amplitudes import AmplitudeTrajectory, AmplitudeVector
from .core import SiteParams, TimeGrid, validate_params
from .errors import ValidationError

MAX_STEP = 1e-3
_VAC = 3


def hamiltonian(p: SiteParams) -> np.ndarray:
    """Hamiltonian restricted to the single-excitation sector plus vacuum.

    Energies are measured from the vacuum level (a constant shift of
    ``-omega0/2``, which drops out of the commutator).
    """
    H = np.diag([p.omega + p.detuning, p.omega, p.omega, 0.0]).astype(complex)
    H[0, 1] = H[1, 0] = p.kappa
    H[1, 2] = H[2, 1] = p.j_coupling
    return H


def lowering_operators(p: SiteParams) -> list[tuple[float, np.ndarray]]:
    a1 = np.zeros((4, 4), complex)
    a1[_VAC, 1] = 1.0
    a2 = np.zeros((4, 4), complex)
    a2[_VAC, 2] = 1.0
    return [(p.gamma1, a1), (p.gamma2, a2)]


def liouvillian(p: SiteParams) -> np.ndarray:
    """16x16 superoperator acting on row-major ``rho.ravel()``."""
    H = hamiltonian(p)
    eye = np.eye(4)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for rate, a in lowering_operators(p):
        nop = a.conj().T @ a
        L += 0.5 * rate * (2 * np.kron(a, a.conj()) - np.kron(nop, eye) - np.kron(eye, nop.T))
    return L


def _rk4_step_matrix(L: np.ndarray, h: float) -> np.ndarray:
    hL = h * L
    hL2 = hL @ hL
    hL3 = hL2 @ hL
    return np.eye(L.shape[0]) + hL + hL2 / 2 + hL3 / 6 + hL3 @ hL / 24


def evolve_density(p: SiteParams, rho0: np.ndarray, times, max_step: float = MAX_STEP) -> np.ndarray:
    """RK4-propagate ``rho0`` (given at ``times[0]``) and return ``rho`` at every time."""
    validate_params(p)
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValidationError("times must be nondecreasing")
    L = liouvillian(p)
    out = np.empty((times.size, 4, 4), complex)
    vec = np.asarray(rho0, complex).ravel()
    out[0] = vec.reshape(4, 4)
    cache = {}
    for i in range(1, times.size):
        dt = times[i] - times[i - 1]
        if dt > 0:
            n = max(1, math.ceil(dt / max_step - 1e-9))
            key = (n, dt)
            if key not in cache:
                cache[key] = np.linalg.matrix_power(_rk4_step_matrix(L, dt / n), n)
            vec = cache[key] @ vec
        out[i] = vec.reshape(4, 4)
    return out


def initial_density(init: AmplitudeVector) -> np.ndarray:
    """``|psi~><psi~| + lambda |000><000|`` for unnormalized amplitudes ``init``."""
    psi = np.zeros(4, complex)
    psi[:3] = init.as_array()
    rho = np.outer(psi, psi.conj())
    rho[_VAC, _VAC] += 1.0 - init.norm_sq
    return rho


def amplitudes_from_density(rho: np.ndarray) -> np.ndarray:
    """Recover ``(h, c1, c2)`` up to a global phase from ``rho = |psi~><psi~| + ...``.

    Moduli come from the diagonal; relative phases from the column of the
    most populated excited state.
    """
    block = rho[..., :3, :3]
    pops = np.real(np.diagonal(block, axis1=-2, axis2=-1)).clip(min=0.0)
    ref = np.argmax(pops, axis=-1)
    col = np.take_along_axis(block, ref[..., None, None], axis=-1)[..., 0]
    ref_pop = np.take_along_axis(pops, ref[..., None], axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        amp = np.where(ref_pop > 0, col / np.sqrt(ref_pop), 0.0)
    # exact moduli from the diagonal, phases from the reference column
    phase = np.exp(1j * np.angle(amp))
    return np.sqrt(pops) * phase


def lindblad_oracle(
    p: SiteParams, init: AmplitudeVector, grid: TimeGrid, max_step: float = MAX_STEP
) -> AmplitudeTrajectory:
    if init.norm_sq > 1 + 1e-9:
        raise ValidationError(f"initial norm^2 {init.norm_sq} exceeds 1")
    times = grid.times
    if grid.t_start != 0.0:
        times = np.concatenate([[0.0], times])
    rhos = evolve_density(p, initial_density(init), times, max_step)
    if grid.t_start != 0.0:
        rhos = rhos[1:]
    return AmplitudeTrajectory(grid, amplitudes_from_density(rhos))
