import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ORDFREE_NO_EXT", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "ordfree._kernels._speedups",
                    ["src/ordfree/_kernels/_speedups.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

# python setup.py build_ext --inplace
setup(ext_modules=ext_modules)
