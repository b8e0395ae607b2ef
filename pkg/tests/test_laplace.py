import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coupledcav.amplitudes import AmplitudeVector, evolve_ode
from coupledcav.core import SiteParams, TimeGrid
from coupledcav.errors import RepeatedRoots
from coupledcav.laplace import (
    amplitudes_analytic,
    characteristic_coefficients,
    laplace_poles,
    numerator,
    solve_cubic,
)

coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def _match(roots, reference):
    # greedy nearest matching
    ref = list(reference)
    err = 0.0
    for r in roots:
        k = int(np.argmin([abs(r - x) for x in ref]))
        err = max(err, abs(r - ref.pop(k)))
    return err


@given(coef, coef, coef)
def test_cubic_matches_companion_eigenvalues(a, b, c):
    roots = solve_cubic(a, b, c)
    ref = np.roots([1, a, b, c])
    scale = 1 + max(abs(a), abs(b), abs(c))
    # residual check is robust even near multiple roots
    residual = np.abs(((roots + a) * roots + b) * roots + c)
    assert np.all(residual < 1e-9 * scale**3)
    seps = [abs(ref[i] - ref[j]) for i in range(3) for j in range(i)]
    if min(seps) > 1e-3:
        assert _match(roots, ref) < 1e-8 * scale


def test_cubic_triple_root():
    assert np.allclose(solve_cubic(-3, 3, -1), 1.0, atol=1e-5)
    assert np.allclose(solve_cubic(0, 0, 0), 0.0)


def test_characteristic_polynomial_matches_direct_expansion():
    p = SiteParams(0.37, 1.3, 1.0, 0.45, 0.6)
    a, b, c = characteristic_coefficients(p)
    for x in [0.3 + 0.2j, -1.1j, 2.0]:
        g = 2 * p.kappa**2 * (2 * x + p.gamma2) + (x + 1j * p.detuning) * numerator(p, x)
        assert abs(g / 4 - (((x + a) * x + b) * x + c)) < 1e-12


def test_residues_sum_to_one():
    poles = laplace_poles(SiteParams(0.4, 1.0, 1.0, 0.5))
    assert abs(poles.residues.sum() - 1) < 1e-9


def test_decoupled_qubit_single_residue():
    p = SiteParams(0.0, 0.0, 1.0, 0.5, detuning=0.7, omega=0.2)
    poles = laplace_poles(p)
    k = int(np.argmax(np.abs(poles.residues)))
    assert abs(poles.residues[k] - 1) < 1e-12
    assert abs(poles.poles[k] - (-1j * (0.7 + 0.2))) < 1e-12
    others = np.delete(poles.residues, k)
    assert np.all(np.abs(others) < 1e-12)
    t = np.linspace(0, 10, 11)
    assert np.allclose(poles.z(t), np.exp(-1j * 0.9 * t), atol=1e-12)


def test_bound_state_pole():
    poles = laplace_poles(SiteParams(0.2, 0.5, 1.0, 0.0))
    re = np.sort(poles.poles.real)
    assert re[-1] > -1e-10
    assert np.all(re[:2] < 0)


@given(
    st.floats(0.01, 3),
    st.floats(0, 3),
    st.floats(0.01, 3),
    st.floats(-2, 2),
)
def test_lossy_poles_strictly_decay(kappa, j, g2, d):
    poles = laplace_poles(SiteParams(kappa, j, 1.0, g2, d))
    assert np.all(poles.poles.real < 0)


def test_repeated_roots_detected():
    # free qubit on resonance with a perfect, uncoupled second cavity: double root at 0
    with pytest.raises(RepeatedRoots):
        laplace_poles(SiteParams(0.0, 0.0, 1.0, 0.0))


def test_analytic_amplitudes_match_integration():
    for p in [SiteParams(0.3, 0.7, 1.0, 0.2, 0.4, omega=2.0), SiteParams(0.4, 0.0, 1.0, 0.5), SiteParams(1.1, 2.0, 1.0, 0.0)]:
        g = TimeGrid.span(10.0, 21)
        ref = evolve_ode(p, AmplitudeVector.excited(), g).data
        assert np.max(np.abs(amplitudes_analytic(p, g.times) - ref)) < 1e-8
