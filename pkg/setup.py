import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("RBOX_NO_EXT", "").strip() in ("", "0"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "rbox._kernels",
                    ["src/rbox/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # noqa: BLE001 - missing Cython/compiler is fine
        print(f"skipping compiled kernels ({exc}); the pure-Python fallback will be used")

setup(ext_modules=ext_modules)
