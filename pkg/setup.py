"""Build the optional Cython kernels.

The package works without them; ``polyco._backend`` falls back to the
numpy implementation when the extension cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("POLYCO_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:  # pragma: no cover - build without the kernels
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "polyco._kernels",
                    ["src/polyco/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
