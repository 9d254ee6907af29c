import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SEPSOS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        import numpy as np

        ext_modules = cythonize(
            [
                Extension(
                    "sepsos._jacobi",
                    ["src/sepsos/_jacobi.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
