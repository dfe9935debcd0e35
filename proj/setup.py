import os
from glob import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen_candidates = ["/usr/include/eigen3", "/usr/local/include/eigen3"]
eigen = next((p for p in eigen_candidates if os.path.isdir(p)), None)
include_dirs = ["include", "vendor"]
if eigen:
    include_dirs.append(eigen)

ext = Pybind11Extension(
    "_sdesplit",
    sorted(glob("src/*.cpp")) + ["python/bindings.cpp"],
    include_dirs=include_dirs,
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
