"""Build script: compiles the optional integrator kernel.

The package is fully functional without the extension (a pure-Python
backend is selected at import time), so any compile failure downgrades
to a warning instead of aborting the install.
"""

import warnings

from setuptools import setup

ext_modules = []
cmdclass = {}

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension
    from setuptools.command.build_ext import build_ext

    class OptionalBuildExt(build_ext):
        def run(self):
            try:
                super().run()
            except Exception as exc:  # pragma: no cover - toolchain dependent
                warnings.warn(f"skipping compiled kernel: {exc}")

        def build_extension(self, ext):
            try:
                super().build_extension(ext)
            except Exception as exc:  # pragma: no cover - toolchain dependent
                warnings.warn(f"skipping compiled kernel {ext.name}: {exc}")

    ext_modules = cythonize(
        [
            Extension(
                "ptsl._kernels._ode_cy",
                ["src/ptsl/_kernels/_ode_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
    cmdclass = {"build_ext": OptionalBuildExt}
except ImportError as exc:  # pragma: no cover - toolchain dependent
    warnings.warn(f"Cython/numpy unavailable, building without compiled kernel: {exc}")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
