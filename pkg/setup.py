"""Build script: compiles the exact-arithmetic kernel extension when a
compiler and Cython are available, otherwise installs pure-Python only
(the package selects the fallback at import)."""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Swallow compiler failures; the pure kernel keeps the package usable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print("qc7: extension build skipped (%s); using pure kernel" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print("qc7: %s build failed (%s); using pure kernel" % (ext.name, exc))


ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "qc7._kernel_c",
                ["src/qc7/_kernel_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    print("qc7: Cython not available; using pure kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
