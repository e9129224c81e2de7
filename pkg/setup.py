from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("quadmaps._kernels", ["src/quadmaps/_kernels.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # No Cython: the package still installs and runs on the pure-Python kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
