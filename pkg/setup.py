from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("rarelex._ctokenize", ["src/rarelex/_ctokenize.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Without Cython the package still works on the pure-Python kernel.
    extensions = []

setup(ext_modules=extensions)
