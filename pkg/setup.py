import os

from setuptools import setup

# The compiled kernel extension is optional: every kernel has a pure-Python
# twin, selected automatically at import time.  Set RBL_SKIP_EXT=1 to force a
# pure-Python install even when Cython and a C compiler are available.
ext_modules = []
if not os.environ.get("RBL_SKIP_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "rbl._kernels_c",
                    sources=["src/rbl/_kernels_c.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
