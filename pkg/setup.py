"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: ``fiberent.backend``
falls back to vectorized numpy kernels when ``fiberent._kernels`` is not
importable.  Cython and a C compiler are only needed for the fast path.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "fiberent._kernels",
                sources=["src/fiberent/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": 3,
        },
    )

setup(ext_modules=ext_modules)
