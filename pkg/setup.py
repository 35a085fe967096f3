"""Build the optional Cython kernel.  The package works without it."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("squarebraid._kernels", ["src/squarebraid/_kernels.pyx"], language="c++",
                   extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
