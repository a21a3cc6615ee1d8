"""Build the optional compiled search kernel.

Without Cython or a C compiler the package installs pure Python and the
kernel falls back to ``segrekit._pykernel``.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("segrekit._ckernel", ["src/segrekit/_ckernel.pyx"],
                   include_dirs=[np.get_include()],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
