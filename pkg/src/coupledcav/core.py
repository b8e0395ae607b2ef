"""Domain types and density-matrix primitives.

All rates are dimensionless multiples of the C1 decay rate ``gamma1``
unless stated otherwise; ``gamma1 = 1`` is the default unit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NegativeRate, NonSquare, ValidationError, ZeroGamma1

NORM_TOL = 1e-12
PSD_TOL = 1e-9


@dataclass(frozen=True)
class SiteParams:
    """Rates and frequencies of one qubit + two-cavity site.

    Attributes
    ----------
    kappa : float
        Qubit-C1 coupling.
    j_coupling : float
        C1-C2 coupling.
    gamma1, gamma2 : float
        Photon decay rates of C1 and C2. ``gamma2 = 0`` is a perfect cavity.
    detuning : float
        Qubit-cavity detuning, qubit frequency minus cavity frequency.
    omega : float
        Common cavity frequency. Observables do not depend on it.
    """

    kappa: float
    j_coupling: float
    gamma1: float = 1.0
    gamma2: float = 0.0
    detuning: float = 0.0
    omega: float = 0.0

    @property
    def regime(self) -> str:
        return classify_regime(self.kappa, self.gamma1)

    @property
    def is_trapping(self) -> bool:
        """Perfect second cavity on resonance: a decay-free bound state exists."""
        return self.gamma2 == 0.0 and self.detuning == 0.0

    def with_(self, **changes) -> "SiteParams":
        return replace(self, **changes)


def classify_regime(kappa: float, gamma1: float) -> str:
    """'weak' iff kappa <= gamma1/4, else 'strong'."""
    return "weak" if kappa <= gamma1 / 4 else "strong"


def validate_params(p: SiteParams) -> SiteParams:
    for name in ("kappa", "j_coupling", "gamma1", "gamma2"):
        value = getattr(p, name)
        if not np.isfinite(value):
            raise ValidationError(f"{name} must be finite, got {value}")
        if value < 0:
            raise NegativeRate(f"{name} must be >= 0, got {value}")
    for name in ("detuning", "omega"):
        if not np.isfinite(getattr(p, name)):
            raise ValidationError(f"{name} must be finite")
    if p.gamma1 == 0:
        raise ZeroGamma1("gamma1 must be > 0: it sets the unit of time")
    return p


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``t_start, ..., t_end`` with ``n_points`` samples."""

    t_start: float
    t_end: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 1:
            raise ValidationError("n_points must be >= 1")
        if self.t_start < 0:
            raise ValidationError("t_start must be >= 0")
        if self.n_points > 1 and not self.t_end > self.t_start:
            raise ValidationError("t_end must exceed t_start")

    @classmethod
    def span(cls, t_end: float, n_points: int) -> "TimeGrid":
        return cls(0.0, float(t_end), int(n_points))

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)

    @property
    def step(self) -> float:
        if self.n_points == 1:
            return 0.0
        return (self.t_end - self.t_start) / (self.n_points - 1)

    def refined(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(self.t_start, self.t_end, (self.n_points - 1) * factor + 1)

    def __len__(self):
        return self.n_points


def psd_check(m, tol: float = PSD_TOL) -> bool:
    """True iff ``m`` is Hermitian within ``tol`` and has no eigenvalue below ``-tol``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.conj().T, rtol=0.0, atol=tol):
        return False
    return bool(np.linalg.eigvalsh(m).min() >= -tol)


def _check_density(rho: np.ndarray, dim: int, tol: float) -> np.ndarray:
    rho = np.array(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ValidationError(f"expected {dim}x{dim} density matrix, got {rho.shape}")
    if abs(np.trace(rho) - 1) > NORM_TOL + tol:
        raise ValidationError(f"trace must be 1, got {np.trace(rho)}")
    if not psd_check(rho, tol):
        raise ValidationError("density matrix must be Hermitian and positive semidefinite")
    rho.setflags(write=False)
    return rho


@dataclass(frozen=True, eq=False)
class QubitState:
    """2x2 density matrix in the basis {|1>, |0>}."""

    rho: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", _check_density(self.rho, 2, PSD_TOL))

    @classmethod
    def pure(cls, alpha: complex, beta: complex) -> "QubitState":
        """State ``alpha|0> + beta|1>``."""
        init = PureQubitInit(alpha, beta)
        psi = np.array([init.beta, init.alpha])
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def bloch(cls, theta: float, phi: float = 0.0) -> "QubitState":
        """Pure state at polar angle ``theta`` measured from |1>."""
        return cls.pure(np.sin(theta / 2) * np.exp(1j * phi), np.cos(theta / 2))

    def __eq__(self, other):
        return isinstance(other, QubitState) and np.array_equal(self.rho, other.rho)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """4x4 density matrix in the basis {|11>, |10>, |01>, |00>}."""

    rho: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", _check_density(self.rho, 4, PSD_TOL))

    @property
    def is_x_form(self) -> bool:
        return is_x_form(self.rho)

    def __eq__(self, other):
        return isinstance(other, TwoQubitState) and np.array_equal(self.rho, other.rho)

    __hash__ = None


_X_MASK = np.eye(4, dtype=bool) | np.fliplr(np.eye(4, dtype=bool))


def is_x_form(rho, tol: float = 1e-10) -> bool:
    return bool(np.all(np.abs(np.asarray(rho)[~_X_MASK]) <= tol))


@dataclass(frozen=True)
class PureQubitInit:
    """Coefficients of ``alpha|0> + beta|1>``."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1) > NORM_TOL:
            raise ValidationError(f"|alpha|^2 + |beta|^2 must be 1, got {norm}")

    @property
    def state(self) -> QubitState:
        return QubitState.pure(self.alpha, self.beta)
