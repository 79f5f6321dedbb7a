"""Build script for the optional compiled eigensolver core.

The package is fully functional without the extension (a pure NumPy
fallback is selected at import time), so a failed compile only costs
speed.  We therefore swallow build errors instead of aborting install.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    extensions = []
else:
    extensions = cythonize(
        [Extension("momt._jacobi", ["src/momt/_jacobi.pyx"])],
        language_level="3",
    )


class OptionalBuildExt(build_ext):
    """build_ext that degrades to a warning when a compiler is missing."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"WARNING: compiled core skipped ({exc}); "
                  "falling back to the pure Python backend")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "falling back to the pure Python backend")


setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
