from setuptools import Extension, setup
from Cython.Build import cythonize

ext_modules = cythonize(
    [
        Extension(
            "hypergames._kernels._fast",
            ["src/hypergames/_kernels/_fast.pyx"],
        )
    ],
    language_level=3,
)

setup(ext_modules=ext_modules)
