"""Build script.  The compiled elimination kernel is optional: if Cython or a
C compiler is unavailable the package installs pure-Python and the runtime
dispatch falls back automatically."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/rectify_kit/exactlin/_fpkernel.pyx"],
        compiler_directives={"language_level": 3},
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print("rectify-kit: skipping compiled kernel (%s)" % exc)

setup(ext_modules=ext_modules)
