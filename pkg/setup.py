from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "fmreason._kernels._fast",
                ["src/fmreason/_kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython at build time: install pure-Python only; the package falls
    # back to fmreason._kernels.pure at import.
    extensions = []

setup(ext_modules=extensions)
