import numpy
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the fast kernel if possible; fall back to the pure backend otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernel skipped ({exc}); pure backend will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} skipped ({exc}); pure backend will be used")


ext = Extension(
    "w2s._kernel._fastcore",
    sources=["src/w2s/_kernel/_fastcore.pyx"],
    include_dirs=[numpy.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    # -ffp-contract=off: the pure backend must reproduce these floats bit for bit,
    # so fused multiply-adds are disabled.
    extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
)

try:
    from Cython.Build import cythonize

    extensions = cythonize([ext], compiler_directives={"language_level": 3})
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
