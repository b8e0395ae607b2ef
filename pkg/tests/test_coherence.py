import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coupledcav.amplitudes import PropagatorSample, propagator
from coupledcav.coherence import (
    asymptotic_coherence,
    coherence,
    coherence_trace,
    evolve_qubit,
    evolve_qubit_array,
    is_stationary_tail,
)
from coupledcav.core import PureQubitInit, QubitState, SiteParams, TimeGrid, psd_check
from coupledcav.sweeps import detuning_argmin

from conftest import random_site

EQUAL = PureQubitInit(1 / math.sqrt(2), 1 / math.sqrt(2))


def test_identity_map_leaves_state():
    rho = QubitState.bloch(0.7, 1.3)
    assert np.allclose(evolve_qubit(rho, PropagatorSample.identity()).rho, rho.rho, atol=1e-15)


def test_excited_state_only_decays():
    z = 0.6 * np.exp(0.4j)
    out = evolve_qubit(QubitState.pure(0, 1), PropagatorSample(z))
    assert np.allclose(out.rho, np.diag([0.36, 0.64]))


@given(st.complex_numbers(max_magnitude=1.0))
def test_equal_superposition_coherence_is_modulus(z):
    out = evolve_qubit(QubitState.pure(1 / math.sqrt(2), 1 / math.sqrt(2)), PropagatorSample(z))
    assert coherence(out) == pytest.approx(abs(z), abs=1e-14)


@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi), st.complex_numbers(max_magnitude=1.0))
def test_coherence_is_linear_in_modulus(theta, phi, z):
    rho = QubitState.bloch(theta, phi)
    assert coherence(evolve_qubit(rho, PropagatorSample(z))) == pytest.approx(
        coherence(rho) * abs(z), abs=1e-14
    )


def test_coherence_examples():
    assert coherence(QubitState.pure(1 / math.sqrt(2), 1 / math.sqrt(2))) == pytest.approx(1.0)
    assert coherence(np.diag([0.3, 0.7])) == 0


def test_evolved_states_are_physical(rng):
    for _ in range(20):
        p = random_site(rng)
        z = propagator(p, rng.uniform(0, 30, size=25)).z
        theta, phi = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        for m in evolve_qubit_array(QubitState.bloch(theta, phi).rho, z):
            assert psd_check(m, 1e-9)
            assert abs(np.trace(m) - 1) < 1e-12


def test_asymptotic_coherence_examples():
    assert asymptotic_coherence(EQUAL, SiteParams(1.0, 1.0)) == pytest.approx(0.5)
    assert asymptotic_coherence(EQUAL, SiteParams(1.0, 0.0)) == 0
    assert asymptotic_coherence(EQUAL, SiteParams(1.0, 1.0, gamma2=0.1)) is None
    assert asymptotic_coherence(EQUAL, SiteParams(1.0, 1.0, detuning=0.3)) is None


@pytest.mark.parametrize("j, kappa", [(1.0, 1.0), (2.0, 0.24), (0.3, 0.4), (0.7, 1.5)])
def test_simulated_coherence_reaches_asymptote(j, kappa):
    p = SiteParams(kappa, j)
    tr = coherence_trace(p, EQUAL, TimeGrid.span(5000.0, 5001))
    assert abs(tr.values[-1] - asymptotic_coherence(EQUAL, p)) < 1e-4
    assert tr.is_trapped()


def test_trace_at_zero_is_initial_coherence(fig2a_site):
    init = PureQubitInit(0.6, 0.8)
    tr = coherence_trace(fig2a_site, init, TimeGrid.span(15.0, 1501))
    assert tr.values[0] == pytest.approx(0.96, abs=1e-15)
    assert not tr.is_trapped()


def test_weak_coupling_without_second_cavity_is_monotone():
    tr = coherence_trace(SiteParams(0.24, 0.0, 1.0, 0.5), EQUAL, TimeGrid.span(15.0, 1501))
    assert np.all(np.diff(tr.values) <= 1e-15)


def test_strong_second_cavity_coupling_oscillates():
    tr = coherence_trace(SiteParams(0.24, 2.0, 1.0, 0.5), EQUAL, TimeGrid.span(15.0, 1501))
    assert np.any(np.diff(tr.values) > 1e-6)


def test_lossy_second_cavity_is_not_trapped():
    tr = coherence_trace(SiteParams(0.24, 1.0, 1.0, 0.1), EQUAL, TimeGrid.span(400.0, 4001))
    assert not tr.is_trapped()


def test_short_window_never_declared_trapped():
    t = np.linspace(0, 100, 101)
    assert not is_stationary_tail(t, np.ones_like(t), min_t_end=200.0)
    assert is_stationary_tail(t, np.ones_like(t))
    assert is_stationary_tail(t, np.zeros_like(t))


@pytest.mark.parametrize("j", [0.5, 1.0])
def test_fastest_decay_near_resonance_with_second_cavity(j):
    deltas = np.arange(0, 3.0001, 0.25)
    best = detuning_argmin(SiteParams(0.24, j, 1.0, 0.2), deltas, 15.0, EQUAL)
    assert abs(best - j) <= 0.25 + 1e-12
