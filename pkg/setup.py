"""Build script for the optional compiled MINRES kernel.

The extension is marked optional: if it fails to compile the package still
installs and ``lsarc.krylov`` falls back to the NumPy implementation.
"""
import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "lsarc._minres_ext",
        ["src/lsarc/_minres_ext.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
)
