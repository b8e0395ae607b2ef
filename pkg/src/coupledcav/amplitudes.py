"""Single-excitation amplitudes and the single-qubit propagator.

The qubit + two-cavity state with one excitation is
``h|100> + c1|010> + c2|001>``, unnormalized: the missing norm is the
vacuum population ``lambda = 1 - |h|^2 - |c1|^2 - |c2|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _ode
from .core import SiteParams, TimeGrid, validate_params
from .errors import RepeatedRoots, ValidationError
from .laplace import laplace_poles

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
BACKENDS = ("analytic", "ode")


@dataclass(frozen=True)
class AmplitudeVector:
    h: complex
    c1: complex
    c2: complex

    @classmethod
    def excited(cls) -> "AmplitudeVector":
        return cls(1.0 + 0j, 0j, 0j)

    @classmethod
    def dark_state(cls, p: SiteParams) -> "AmplitudeVector":
        """Normalized ``J|100> - kappa|001>``, decay-free when gamma2 = detuning = 0."""
        n = np.hypot(p.j_coupling, p.kappa)
        return cls(p.j_coupling / n + 0j, 0j, -p.kappa / n + 0j)

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.c1, self.c2], dtype=complex)

    @property
    def norm_sq(self) -> float:
        return abs(self.h) ** 2 + abs(self.c1) ** 2 + abs(self.c2) ** 2

    @property
    def vacuum_population(self) -> float:
        return 1.0 - self.norm_sq


@dataclass(frozen=True, eq=False)
class AmplitudeTrajectory:
    """Amplitudes sampled on ``grid``; ``data[i] = (h, c1, c2)`` at ``grid.times[i]``."""

    grid: TimeGrid
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != (self.grid.n_points, 3):
            raise ValidationError("trajectory shape does not match grid")

    def __len__(self):
        return self.grid.n_points

    def __getitem__(self, i) -> AmplitudeVector:
        return AmplitudeVector(*(complex(v) for v in self.data[i]))

    @property
    def samples(self) -> list[AmplitudeVector]:
        return [self[i] for i in range(len(self))]

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def h(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def c1(self) -> np.ndarray:
        return self.data[:, 1]

    @property
    def c2(self) -> np.ndarray:
        return self.data[:, 2]

    @property
    def norm_sq(self) -> np.ndarray:
        return np.sum(np.abs(self.data) ** 2, axis=1)

    @property
    def vacuum_population(self) -> np.ndarray:
        return 1.0 - self.norm_sq


def generator(p: SiteParams, rotating: bool = True) -> np.ndarray:
    """Matrix ``M`` with ``d/dt (h, c1, c2) = M (h, c1, c2)``.

    With ``rotating=True`` the common frequency ``omega`` is removed.
    """
    w = 0.0 if rotating else p.omega
    h_eff = np.array(
        [
            [w + p.detuning, p.kappa, 0.0],
            [p.kappa, w - 0.5j * p.gamma1, p.j_coupling],
            [0.0, p.j_coupling, w - 0.5j * p.gamma2],
        ],
        dtype=complex,
    )
    return -1j * h_eff


def evolve_ode(
    p: SiteParams,
    init: AmplitudeVector,
    grid: TimeGrid,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> AmplitudeTrajectory:
    """Integrate the amplitude equations with adaptive Dormand-Prince 5(4).

    Integration runs in the frame rotating at ``omega``; the lab-frame phase
    ``exp(-i omega t)`` is restored afterwards when ``omega != 0``.
    """
    validate_params(p)
    y0 = init.as_array()
    if init.norm_sq > 1 + 1e-9:
        raise ValidationError(f"initial norm^2 {init.norm_sq} exceeds 1")
    times = grid.times
    if grid.t_start != 0.0:
        times = np.concatenate([[0.0], times])
    data = _ode.integrate_linear(generator(p), y0, times, rtol, atol)
    if grid.t_start != 0.0:
        data = data[1:]
    if p.omega != 0.0:
        data = data * np.exp(-1j * p.omega * grid.times)[:, None]
    return AmplitudeTrajectory(grid, data)


@dataclass(frozen=True, eq=False)
class PropagatorSample:
    """Single-qubit map parameters at time(s) ``t``: coherence factor ``z``, ``u = |z|^2``.

    ``backend`` records which backend actually produced ``z``; it differs from
    the requested one when repeated poles forced a fallback to integration.
    """

    z: complex | np.ndarray
    backend: str = "analytic"

    @property
    def u(self):
        return np.abs(self.z) ** 2

    @property
    def fell_back(self) -> bool:
        return self.backend == "ode-fallback"

    @classmethod
    def identity(cls) -> "PropagatorSample":
        return cls(1.0 + 0j, "identity")


def _z_ode(p: SiteParams, t: np.ndarray, rtol: float, atol: float) -> np.ndarray:
    flat = t.ravel()
    order = np.argsort(flat, kind="stable")
    ts = np.concatenate([[0.0], flat[order]])
    h = _ode.integrate_linear(generator(p), np.array([1, 0, 0], complex), ts, rtol, atol)[1:, 0]
    z = np.empty_like(h)
    z[order] = h
    if p.omega != 0.0:
        z = z * np.exp(-1j * p.omega * flat)
    return z.reshape(t.shape)


def propagator(
    p: SiteParams,
    t,
    backend: str = "analytic",
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> PropagatorSample:
    """Qubit amplitude ``z(t)`` starting from the excited state, at scalar or array ``t``."""
    if backend not in BACKENDS:
        raise ValidationError(f"backend must be one of {BACKENDS}, got {backend!r}")
    validate_params(p)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("propagator requires t >= 0")
    used = backend
    if backend == "analytic":
        try:
            z = laplace_poles(p).z(t_arr)
        except RepeatedRoots:
            used = "ode-fallback"
            z = _z_ode(p, t_arr, rtol, atol)
    else:
        z = _z_ode(p, t_arr, rtol, atol)
    z = np.asarray(z)
    if z.ndim == 0:
        z = complex(z)
    return PropagatorSample(z, used)
