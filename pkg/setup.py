"""Build the optional Cython kernels.

The package works without them: ``mevdist.kernels`` falls back to the
numpy implementation when the extension is missing or fails to build.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("MEVDIST_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "mevdist._ckernels",
                    ["src/mevdist/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
