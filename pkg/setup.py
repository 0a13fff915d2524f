"""Build the optional Cython kernels.

The package works without them: ``dynmahler.kernels`` falls back to numpy
when ``dynmahler._ckernels`` cannot be imported.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("DYNMAHLER_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "dynmahler._ckernels",
                    ["src/dynmahler/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
