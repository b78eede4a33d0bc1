"""Build script: compiles the RK4 trajectory kernel when Cython is available.

The package is fully functional without the extension (a pure-Python kernel
is selected at import time), so compilation failures are non-fatal:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "growthmfg._kernel",
                ["src/growthmfg/_kernel.pyx"],
                # -ffp-contract=off keeps the compiled kernel bit-compatible
                # with the pure-Python fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
