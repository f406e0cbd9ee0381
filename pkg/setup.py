"""Build script for the optional compiled core.

The package works without the extension (pure-Python kernels are selected at
import time), so any compiler or Cython failure downgrades to a warning
instead of breaking the install.
"""
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def make_extensions():
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("warning: Cython not available, building without the compiled core",
              file=sys.stderr)
        return []
    ext = Extension(
        "chsh_tradeoff._fastcore",
        ["src/chsh_tradeoff/_fastcore.pyx"],
        # -ffp-contract=off: the compiled kernels must stay bit-identical to the
        # pure-Python ones, so fused multiply-adds are disabled.
        extra_compile_args=[
            "-O2",
            "-ffp-contract=off",
            "-fno-builtin-sin",
            "-fno-builtin-cos",
            "-fno-builtin-sincos",
        ],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """Skip the extension (with a warning) when no compiler is usable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled core skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: compiled core skipped ({exc})", file=sys.stderr)


setup(ext_modules=make_extensions(), cmdclass={"build_ext": optional_build_ext})
