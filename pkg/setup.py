"""Build script.

Compiles the optional C kernels when Cython and a C compiler are available.
The package is fully functional without them (a pure-Python fallback is
selected at import time), so any failure here downgrades to a warning.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class _OptionalBuildExt(build_ext):
    """Build extensions if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: skipping C kernels ({exc}); "
                  "pure-Python fallback will be used", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: could not compile {ext.name} ({exc}); "
                  "pure-Python fallback will be used", file=sys.stderr)


ext_modules = []
if not os.environ.get("AASLAB_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("aaslab._kernels._ckernels",
                       ["src/aaslab/_kernels/_ckernels.pyx"])],
            language_level="3",
        )
    except ImportError:  # pragma: no cover - toolchain dependent
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": _OptionalBuildExt})
