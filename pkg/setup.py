"""Build script: compiles the optional Monte Carlo simulation kernel.

The package is fully functional without the compiled extension (a pure-Python
twin of the kernel is selected at import time), so any failure to build the
extension is non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/mttdl/montecarlo/_kernel.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"warning: compiled simulation kernel skipped ({exc}); "
          "the pure-Python backend will be used")

setup(ext_modules=ext_modules)
