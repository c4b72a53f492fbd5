import os

from setuptools import setup

ext_modules = []
if os.environ.get("PARAMOD_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/paramod/_kernels/cykernel.pyx"],
            language_level=3,
        )
    except ImportError:
        # pure-Python kernel is selected at import time when the
        # extension is absent
        ext_modules = []

setup(ext_modules=ext_modules)
