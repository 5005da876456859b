"""Build script: compiles the optional Cython stencil kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so any compilation failure downgrades to a pure-Python install
instead of aborting.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "kgblowup._kernels._stencil",
                ["src/kgblowup/_kernels/_stencil.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"kgblowup: skipping compiled kernel ({exc}); using pure-Python fallback")

setup(ext_modules=ext_modules)
