"""Builds the optional Cython max-flow kernel.

The package works without it; ``clusterdss._kernels`` falls back to the
pure-Python implementation when the extension is missing.
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
                "clusterdss._kernels._maxflow_c",
                ["src/clusterdss/_kernels/_maxflow_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
