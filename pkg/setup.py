import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("provlogic._kernel", ["src/provlogic/_kernel.pyx"],
                   include_dirs=[numpy.get_include()], optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
