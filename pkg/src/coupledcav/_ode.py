"""Select the linear-ODE kernel: compiled if built, pure Python otherwise.

Set ``COUPLEDCAV_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _ode_py

try:
    if os.environ.get("COUPLEDCAV_PURE_PYTHON") == "1":
        raise ImportError("pure-python kernel requested")
    from ._ode_ext import integrate_linear
    KERNEL = "compiled"
except ImportError:
    integrate_linear = _ode_py.integrate_linear
    KERNEL = "python"

integrate_linear_py = _ode_py.integrate_linear

__all__ = ["integrate_linear", "integrate_linear_py", "KERNEL"]
