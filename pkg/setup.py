import os

from setuptools import setup

ext_modules = []
if not os.environ.get("TORUSALG_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("torusalg._kernels", ["src/torusalg/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
