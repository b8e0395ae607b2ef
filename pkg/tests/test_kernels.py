import numpy as np
import pytest
import scipy.linalg as sl

from coupledcav import _ode, _ode_py
from coupledcav.amplitudes import generator
from coupledcav.core import SiteParams
from coupledcav.errors import StepSizeUnderflow

KERNELS = [pytest.param(_ode_py.integrate_linear, id="python")]
try:
    from coupledcav import _ode_ext

    KERNELS.append(pytest.param(_ode_ext.integrate_linear, id="compiled"))
except ImportError:  # pragma: no cover - extension not built
    _ode_ext = None


def expm_reference(M, y0, times):
    return np.array([sl.expm(M * t) @ y0 for t in times])


@pytest.mark.parametrize("integrate", KERNELS)
@pytest.mark.parametrize(
    "params",
    [
        SiteParams(0.4, 2.0, 1.0, 0.5),
        SiteParams(0.3, 0.7, 1.0, 0.2, 0.4),
        SiteParams(2.0, 3.0, 1.0, 0.0),
        SiteParams(0.0, 0.0, 1.0, 0.0, 1.5),
    ],
)
def test_kernel_matches_matrix_exponential(integrate, params):
    M = generator(params)
    y0 = np.array([1, 0, 0], complex)
    times = np.linspace(0, 20, 81)
    got = integrate(M, y0, times, 1e-10, 1e-12)
    assert np.max(np.abs(got - expm_reference(M, y0, times))) < 1e-8


@pytest.mark.skipif(_ode_ext is None, reason="compiled kernel not built")
def test_compiled_and_python_take_identical_steps(rng):
    for _ in range(5):
        M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) - 2 * np.eye(4)
        y0 = rng.normal(size=4) + 1j * rng.normal(size=4)
        times = np.sort(rng.uniform(0, 5, 30))
        times[0] = 0.0
        a = _ode_ext.integrate_linear(M, y0, times, 1e-9, 1e-12)
        b = _ode_py.integrate_linear(M, y0, times, 1e-9, 1e-12)
        assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.parametrize("integrate", KERNELS)
def test_kernel_edge_cases(integrate):
    M = np.array([[-1.0]], complex)
    assert integrate(M, [1.0], np.array([])).shape == (0, 1)
    out = integrate(M, [1.0], np.array([0.0, 0.0, 1.0, 1.0]))
    assert out[0, 0] == out[1, 0] == 1.0
    assert out[2, 0] == pytest.approx(np.exp(-1), rel=1e-9)
    assert out[3, 0] == out[2, 0]


@pytest.mark.parametrize("integrate", KERNELS)
def test_kernel_step_budget_raises(integrate):
    M = np.array([[-1j * 1e3]], complex)
    with pytest.raises(StepSizeUnderflow):
        integrate(M, [1.0], np.array([0.0, 100.0]), max_steps=10)


def test_selected_kernel_reported():
    assert _ode.KERNEL in ("compiled", "python")
