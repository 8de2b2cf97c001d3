import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator if possible; fall back to pure Python."""

    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:
            print("wavecls: skipping compiled kernel (%s); "
                  "using the pure-Python backend" % exc, file=sys.stderr)

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            print("wavecls: skipping compiled kernel (%s); "
                  "using the pure-Python backend" % exc, file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("wavecls._kernel", ["src/wavecls/_kernel.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
