"""Build the optional compiled ODE kernel.

If Cython or a C compiler is unavailable the package still installs and
falls back to the pure-Python integrator at import time.
"""
import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("COUPLEDCAV_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "coupledcav._ode_ext",
                    ["src/coupledcav/_ode_ext.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
