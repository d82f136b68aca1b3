import os

from setuptools import setup, Extension

ext_modules = []
if os.path.exists("src/padiclfc/_kernels.pyx"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("padiclfc._kernels", ["src/padiclfc/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        # Pure-Python fallback is selected at import time; the package
        # works without the compiled extension.
        ext_modules = []

setup(ext_modules=ext_modules)
