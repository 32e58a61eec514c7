import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("killingcalc._fastelim", ["src/killingcalc/_fastelim.pyx"])],
        language_level=3,
    )
except ImportError:
    sys.stderr.write(
        "Cython unavailable; installing with the pure-Python elimination backend only\n"
    )

setup(ext_modules=ext_modules)
