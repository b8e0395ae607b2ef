import numpy as np
import pytest

from coupledcav.amplitudes import AmplitudeVector, evolve_ode
from coupledcav.core import SiteParams, TimeGrid, psd_check
from coupledcav.lindblad import (
    amplitudes_from_density,
    evolve_density,
    initial_density,
    lindblad_oracle,
)

from conftest import random_site


def test_oracle_matches_amplitude_equations(rng):
    grid = TimeGrid.span(10.0, 41)
    for _ in range(5):
        p = random_site(rng, max_rate=2.0)
        init = AmplitudeVector(0.6, 0.48j, -0.64 * np.exp(0.3j))
        a = lindblad_oracle(p, init, grid).data
        b = evolve_ode(p, init, grid).data
        assert np.max(np.abs(np.abs(a) - np.abs(b))) < 1e-9


def test_trace_preserved_and_vacuum_population(rng):
    p = SiteParams(0.3, 0.7, 1.0, 0.2, 0.4, omega=3.0)
    init = AmplitudeVector(0.8, 0.0, 0.6j)
    grid = TimeGrid.span(8.0, 81)
    rhos = evolve_density(p, initial_density(init), grid.times)
    assert np.max(np.abs(np.trace(rhos, axis1=1, axis2=2) - 1)) < 1e-10
    traj = evolve_ode(p, init, grid)
    assert np.max(np.abs(rhos[:, 3, 3].real - traj.vacuum_population)) < 1e-9
    assert all(psd_check(r) for r in rhos[::10])


def test_vacuum_sector_decouples():
    # no coherence between one-excitation states and vacuum is ever generated
    p = SiteParams(1.2, 0.7, 1.0, 0.3)
    rhos = evolve_density(p, initial_density(AmplitudeVector.excited()), np.linspace(0, 5, 11))
    assert np.max(np.abs(rhos[:, :3, 3])) < 1e-14


def test_amplitude_reconstruction_up_to_phase():
    psi = np.array([0.3, -0.5j, 0.4 * np.exp(1.1j)])
    rho = np.zeros((4, 4), complex)
    rho[:3, :3] = np.outer(psi, psi.conj())
    rho[3, 3] = 1 - np.vdot(psi, psi).real
    rec = amplitudes_from_density(rho)
    phase = rec[1] / psi[1]
    assert abs(abs(phase) - 1) < 1e-12
    assert np.allclose(rec, psi * phase)


@pytest.mark.parametrize("t_start", [0.0, 1.5])
def test_oracle_grid_offsets(t_start):
    p = SiteParams(0.4, 1.0, 1.0, 0.5)
    g = TimeGrid(t_start, 4.0, 6)
    a = lindblad_oracle(p, AmplitudeVector.excited(), g)
    b = evolve_ode(p, AmplitudeVector.excited(), g)
    assert np.allclose(np.abs(a.data), np.abs(b.data), atol=1e-9)
