"""Build script for the optional compiled kernels.

The package is pure Python plus one Cython extension for the hot loops.
If Cython or a C compiler is missing the extension is skipped and the
NumPy fallback in wideband_outage._pykernels is used at runtime.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, warn and continue otherwise."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # compiler missing or broken
            self._warn(exc)

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(f"compiled kernels skipped ({exc}); falling back to NumPy")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("wideband_outage._kernels", ["src/wideband_outage/_kernels.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
