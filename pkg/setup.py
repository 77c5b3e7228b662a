"""Build script: compiles the optional sweep kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); the compiled kernel is only a speedup for the
finite-volume transport sweeps.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, cython failure, ...
            print(f"WARNING: building sweep kernel failed ({exc}); "
                  "falling back to the pure NumPy backend", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: {ext.name} failed to compile ({exc}); "
                  "falling back to the pure NumPy backend", file=sys.stderr)


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "phonodiff.kernels._sweep",
        ["src/phonodiff/kernels/_sweep.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
