"""Build script: compiles the Cython arithmetic kernel when a toolchain is
available and falls back to the pure-Python kernel otherwise (selection
happens at import time in gencliff._core)."""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Make the extension best-effort: a missing compiler or Cython must not
    break installation, since the pure kernel is a full implementation."""

    def run(self):
        try:
            super().run()
        except Exception as exc:      # noqa: BLE001 - any build failure is fine
            print(f"warning: compiled kernel skipped ({exc}); "
                  "using the pure-Python kernel")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:      # noqa: BLE001
            print(f"warning: compiled kernel skipped ({exc}); "
                  "using the pure-Python kernel")


def extensions():
    if os.environ.get("GENCLIFF_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/gencliff/_core/_ckernel.pyx"],
        compiler_directives={"language_level": "3"},
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
