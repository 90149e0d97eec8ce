"""Build script for the optional compiled Monte-Carlo kernels.

The package is fully functional without the extension (a vectorized numpy
backend is selected at import time).  Building the extension gives a faster
per-trial kernel:

    python setup.py build_ext --inplace

A missing compiler or Cython only disables the accelerator; it never breaks
the install.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "vhokit._kernels._mc_core",
                sources=["src/vhokit/_kernels/_mc_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
