"""Two independent qubits, each in its own coupled-cavity site.

The joint map is the tensor product of the two single-qubit maps; for
Bell-like initial states ``alpha|00> + beta|11>`` the evolved state stays in
X form and concurrence has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import PropagatorSample, propagator
from .coherence import is_stationary_tail
from .core import NORM_TOL, SiteParams, TimeGrid, TwoQubitState, is_x_form, validate_params
from .errors import HorizonTooShort, NegativeEigenvalue, NotXState, ValidationError

ZERO_CONCURRENCE = 1e-6
NEVER_DIES = math.inf
TRAP_EVAL_TIME = 5000.0
ESD_DT = 0.02
ESD_MAX_SAMPLES = 2_000_000
_CHUNK = 500_000

_SIGMA_YY = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])


@dataclass(frozen=True)
class TwoSiteParams:
    site_a: SiteParams
    site_b: SiteParams

    def __post_init__(self):
        validate_params(self.site_a)
        validate_params(self.site_b)
        if self.site_a.gamma1 != self.site_b.gamma1:
            raise ValidationError("both sites must share gamma1, the common unit")

    @classmethod
    def symmetric(cls, kappa_a, kappa_b, j_a, j_b, gamma2=0.0, gamma=1.0) -> "TwoSiteParams":
        return cls(
            SiteParams(kappa_a, j_a, gamma, gamma2),
            SiteParams(kappa_b, j_b, gamma, gamma2),
        )

    @property
    def is_trapping(self) -> bool:
        return self.site_a.is_trapping and self.site_b.is_trapping


@dataclass(frozen=True)
class BellLikeInit:
    """``alpha|00> + beta|11>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1) > NORM_TOL:
            raise ValidationError(f"|alpha|^2 + |beta|^2 must be 1, got {norm}")

    @classmethod
    def from_alpha(cls, alpha: float) -> "BellLikeInit":
        return cls(alpha, math.sqrt(1 - alpha * alpha))

    @property
    def rho(self) -> np.ndarray:
        psi = np.array([self.beta, 0, 0, self.alpha], dtype=complex)
        return np.outer(psi, psi.conj())

    @property
    def state(self) -> TwoQubitState:
        return TwoQubitState(self.rho)

    @property
    def initial_concurrence(self) -> float:
        return 2 * abs(self.alpha * self.beta)


@dataclass(frozen=True, eq=False)
class ConcurrenceTrace:
    grid: TimeGrid
    values: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


@dataclass(frozen=True)
class EsdResult:
    """Entanglement sudden death analysis.

    ``t_star`` is the last death time before the horizon (``inf`` if the
    concurrence never settles to zero); ``first_zero`` the first time it
    touches zero.
    """

    t_star: float
    first_zero: float
    horizon: float

    @property
    def never_dies(self) -> bool:
        return math.isinf(self.t_star)


def _kraus(z) -> np.ndarray:
    """Kraus pair of the single-qubit map, shape ``z.shape + (2, 2, 2)``."""
    z = np.asarray(z, dtype=complex)
    k = np.zeros(z.shape + (2, 2, 2), dtype=complex)
    k[..., 0, 0, 0] = z
    k[..., 0, 1, 1] = 1.0
    k[..., 1, 1, 0] = np.sqrt(np.clip(1.0 - np.abs(z) ** 2, 0.0, None))
    return k


def compose_array(rho0: np.ndarray, z_a, z_b) -> np.ndarray:
    """Apply both local maps to a 4x4 ``rho0`` for arrays of ``z_a``, ``z_b``."""
    ka, kb = _kraus(z_a), _kraus(z_b)
    r = np.asarray(rho0, complex).reshape(2, 2, 2, 2)
    # rho'[a b, c d] = sum_{i,j} KA_i[a,e] KB_j[b,f] rho[e f, g h] conj(KA_i[c,g]) conj(KB_j[d,h])
    out = np.einsum("...iae,...jbf,efgh,...icg,...jdh->...abcd", ka, kb, r, ka.conj(), kb.conj())
    return out.reshape(out.shape[:-4] + (4, 4))


def compose_two_qubit(rho0: TwoQubitState, prop_a: PropagatorSample, prop_b: PropagatorSample) -> TwoQubitState:
    return TwoQubitState(compose_array(rho0.rho, prop_a.z, prop_b.z))


def x_state_elements(rho0: np.ndarray, z_a, z_b) -> dict[str, np.ndarray]:
    """Evolved diagonal and anti-diagonal elements from an X-form ``rho0``."""
    z_a, z_b = np.asarray(z_a, complex), np.asarray(z_b, complex)
    ua, ub = np.abs(z_a) ** 2, np.abs(z_b) ** 2
    r11, r22, r33, r44 = (rho0[i, i].real for i in range(4))
    return {
        "rho11": ua * ub * r11,
        "rho22": ua * (1 - ub) * r11 + ua * r22,
        "rho33": (1 - ua) * ub * r11 + ub * r33,
        "rho44": (1 - ua) * (1 - ub) * r11 + (1 - ua) * r22 + (1 - ub) * r33 + r44,
        "rho14": z_a * z_b * rho0[0, 3],
        "rho23": z_a * np.conj(z_b) * rho0[1, 2],
    }


def _x_concurrence(el: dict[str, np.ndarray]) -> np.ndarray:
    c1 = np.abs(el["rho14"]) - np.sqrt(np.clip(el["rho22"] * el["rho33"], 0.0, None))
    c2 = np.abs(el["rho23"]) - np.sqrt(np.clip(el["rho11"] * el["rho44"], 0.0, None))
    return 2 * np.maximum(0.0, np.maximum(c1, c2))


def concurrence_x(rho: TwoQubitState | np.ndarray) -> float:
    """Closed-form concurrence of an X state."""
    m = rho.rho if isinstance(rho, TwoQubitState) else np.asarray(rho)
    if not is_x_form(m):
        raise NotXState("matrix has weight outside the diagonal and anti-diagonal")
    el = {
        "rho11": m[0, 0].real,
        "rho22": m[1, 1].real,
        "rho33": m[2, 2].real,
        "rho44": m[3, 3].real,
        "rho14": m[0, 3],
        "rho23": m[1, 2],
    }
    return float(min(1.0, _x_concurrence(el)))


def concurrence_wootters(rho: TwoQubitState | np.ndarray) -> float:
    """Wootters concurrence of an arbitrary two-qubit state.

    The square roots of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)``
    are taken as the singular values of ``sqrt(rho) sqrt(rho~)``, which avoids
    square-rooting tiny eigenvalues.
    """
    m = rho.rho if isinstance(rho, TwoQubitState) else np.asarray(rho, complex)
    evals, vecs = np.linalg.eigh(m)
    if evals.min() < -1e-9:
        raise NegativeEigenvalue(f"density matrix eigenvalue {evals.min():.3g} < -1e-9")
    root = (vecs * np.sqrt(evals.clip(min=0.0))) @ vecs.conj().T
    root_tilde = _SIGMA_YY @ root.conj() @ _SIGMA_YY
    lam = np.linalg.svd(root @ root_tilde, compute_uv=False)
    return float(np.clip(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0))


def concurrence_values(params: TwoSiteParams, init: BellLikeInit, times, backend: str = "analytic") -> np.ndarray:
    """Concurrence at ``times`` via the X-state closed form."""
    times = np.asarray(times, dtype=float)
    out = np.empty(times.shape)
    flat_t, flat_out = times.ravel(), out.ravel()
    rho0 = init.rho
    for start in range(0, flat_t.size, _CHUNK):
        t = flat_t[start : start + _CHUNK]
        z_a = propagator(params.site_a, t, backend).z
        z_b = propagator(params.site_b, t, backend).z
        flat_out[start : start + _CHUNK] = _x_concurrence(x_state_elements(rho0, z_a, z_b))
    return np.minimum(out, 1.0)


def concurrence_trace(
    params: TwoSiteParams, init: BellLikeInit, grid: TimeGrid, backend: str = "analytic"
) -> ConcurrenceTrace:
    return ConcurrenceTrace(grid, concurrence_values(params, init, grid.times, backend))


def _bisect_crossing(f, lo: float, hi: float, rel_tol: float) -> float:
    """Locate where ``f`` drops from ``> 0`` at ``lo`` to ``<= 0`` at ``hi``."""
    while hi - lo > rel_tol * max(hi, 1e-12):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def esd_analysis(
    params: TwoSiteParams,
    init: BellLikeInit,
    horizon: float,
    eps: float = ZERO_CONCURRENCE,
    dt: float | None = None,
    backend: str = "analytic",
    rel_tol: float = 1e-4,
) -> EsdResult:
    """Find when concurrence dies for good on ``[0, horizon]``.

    Raises
    ------
    HorizonTooShort
        When the tail window ``[0.9 horizon, horizon]`` neither sits at zero
        nor at a stationary positive value.
    """
    if horizon <= 0:
        raise ValidationError("horizon must be > 0")
    if dt is None:
        dt = max(min(ESD_DT, horizon / 2000), horizon / ESD_MAX_SAMPLES)
    n = int(math.ceil(horizon / dt)) + 1
    times = np.linspace(0.0, horizon, n)
    c = concurrence_values(params, init, times, backend)
    alive = c > eps
    if not alive.any():
        return EsdResult(0.0, 0.0, horizon)

    def excess(t):
        return concurrence_values(params, init, np.array([t]), backend)[0] - eps

    tail = times >= 0.9 * horizon
    if not alive[tail].any():
        last = int(np.nonzero(alive)[0][-1])
        t_star = _bisect_crossing(excess, times[last], times[last + 1], rel_tol)
        first = int(np.argmin(alive))
        t_first = _bisect_crossing(excess, times[first - 1], times[first], rel_tol)
        return EsdResult(float(t_star), float(t_first), horizon)
    if alive[tail].all() and is_stationary_tail(times, c):
        dead = np.nonzero(~alive)[0]
        if dead.size:
            first = int(dead[0])
            t_first = _bisect_crossing(excess, times[first - 1], times[first], rel_tol)
        else:
            t_first = NEVER_DIES
        return EsdResult(NEVER_DIES, t_first, horizon)
    raise HorizonTooShort(f"concurrence has not settled by t={horizon}")


def esd_time(
    params: TwoSiteParams,
    init: BellLikeInit,
    horizon: float,
    eps: float = ZERO_CONCURRENCE,
    backend: str = "analytic",
) -> float:
    """Last entanglement death time before ``horizon``; ``inf`` if it never dies."""
    return esd_analysis(params, init, horizon, eps=eps, backend=backend).t_star


def trapped_concurrence(
    params: TwoSiteParams,
    init: BellLikeInit,
    t_eval: float = TRAP_EVAL_TIME,
    eps: float = ZERO_CONCURRENCE,
) -> float | None:
    """Steady concurrence at ``t_eval``, or None if no entanglement is trapped.

    None is returned when either site lacks a decay-free bound state, when the
    tail has not settled, or when the steady value is zero (death).
    """
    if not params.is_trapping:
        return None
    times = np.linspace(0.9 * t_eval, t_eval, 2001)
    c = concurrence_values(params, init, times)
    if not is_stationary_tail(times, c) or c[-1] <= eps:
        return None
    return float(c[-1])


def asymptotic_concurrence(params: TwoSiteParams, init: BellLikeInit) -> float:
    """X-state concurrence at the long-time limit ``|z_j| -> J_j^2 / (J_j^2 + kappa_j^2)``.

    Only meaningful when both sites trap; a site with ``J = kappa = 0`` keeps ``|z| = 1``.
    """

    def z_inf(p: SiteParams) -> float:
        d = p.j_coupling**2 + p.kappa**2
        return 1.0 if d == 0 else p.j_coupling**2 / d

    el = x_state_elements(init.rho, z_inf(params.site_a), z_inf(params.site_b))
    return float(_x_concurrence(el))
