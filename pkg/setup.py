import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off: the pure-Python solver mirrors the compiled one
# operation for operation; fused multiply-adds would break bit equality.
extensions = [
    Extension(
        "swarmsvr._smo",
        ["src/swarmsvr/_smo.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
