import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("UMBRA_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "umbra._kernels",
                    ["src/umbra/_kernels.pyx"],
                    libraries=["gmp"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False},
        )

setup(ext_modules=ext_modules)
