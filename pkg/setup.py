"""Build script for the compiled kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so the extension is marked optional: a missing compiler or
Cython only costs speed, never a failed install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "qpkc._kernels._core",
                ["src/qpkc/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
