import os

from setuptools import Extension, setup

# The compiled counting kernel is optional: the package falls back to the
# numpy reference implementation when the extension is absent.
ext_modules = []
if os.environ.get("MIXMULT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "mixmult.counting._core",
                    ["src/mixmult/counting/_core.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
