"""Build script: compiles the optional C speedup kernels when possible.

The package is fully functional without the extension (a pure-Python
implementation of the same kernels is selected at import time), so a broken
compiler toolchain must never block installation. Set MULTIREF_NO_EXTENSION=1
to skip the compile step entirely.
"""

import os
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Degrade to the pure-Python kernels when the extension fails to build."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            warnings.warn(f"skipping C speedups, building pure-Python only: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"failed to build {ext.name}, continuing without it: {exc}")


def extensions():
    if os.environ.get("MULTIREF_NO_EXTENSION"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available, building pure-Python only")
        return []
    return cythonize(
        [Extension("multiref.kernels._speedups", ["src/multiref/kernels/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
