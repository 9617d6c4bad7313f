"""Builds the optional compiled kernel extension.

The package is fully functional without the extension: a pure-Python
fallback with identical numerics is selected at import time.  Compiling
the extension speeds up grid sweeps and batch scoring (see
benchmarks/bench_kernels.py).  Set AIVALUE_SKIP_EXT=1 to force a
pure-Python install.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Degrade to the pure-Python fallback when no compiler is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing toolchain, not a code error
            print(f"warning: kernel extension not built ({exc}); "
                  "using the pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to compile {ext.name} ({exc}); "
                  "using the pure-Python fallback")


ext_modules = []
cmdclass = {}
if os.environ.get("AIVALUE_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("aivalue._kernels", ["src/aivalue/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
        cmdclass = {"build_ext": optional_build_ext}
    except ImportError:
        print("warning: Cython not available; using the pure-Python fallback")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
