"""Build script for the optional compiled kernels.

The package is fully functional without the extension; _kernels falls back
to the pure-Python implementation when the compiled module is absent.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "mocsim._kernels._speedups",
                ["src/mocsim/_kernels/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=extensions)
