"""Build script: compiles the optional fast kernels when Cython is available.

The package is fully functional without the extension (a pure-Python kernel
implementation is selected at import time); the compiled module only makes the
big enumerations fast.  Set SS3_NO_EXT=1 to skip compilation entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _extensions():
    if os.environ.get("SS3_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        sys.stderr.write("ss3mass: Cython not available, building pure-Python only\n")
        return []
    return cythonize(
        [
            Extension(
                "ss3mass._kernels._fast",
                ["src/ss3mass/_kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


class OptionalBuildExt(build_ext):
    """Never fail the install because the C toolchain is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            sys.stderr.write(f"ss3mass: skipping fast kernels ({exc})\n")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            sys.stderr.write(f"ss3mass: skipping {ext.name} ({exc})\n")


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
