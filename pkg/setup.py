from setuptools import Extension, setup

from Cython.Build import cythonize

extensions = [
    Extension("relfm._core_c", ["src/relfm/_core_c.pyx"]),
]

setup(ext_modules=cythonize(extensions, language_level="3"))
