"""CMake-backed build of the dmabeam._core extension.

Use `pip install . --no-build-isolation`. The compiled module lands next to
python/dmabeam/__init__.py inside the wheel.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        extdir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp) / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        configure = [
            "cmake",
            str(source_dir),
            f"-DPython3_EXECUTABLE={sys.executable}",
            f"-DDMABEAM_PYTHON_OUTPUT_DIR={extdir / 'dmabeam'}",
            "-DDMABEAM_BUILD_PYTHON=ON",
            "-DDMABEAM_BUILD_CLI=OFF",
            "-DDMABEAM_BUILD_TESTS=OFF",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        try:
            import pybind11

            configure.append(f"-Dpybind11_DIR={pybind11.get_cmake_dir()}")
        except ImportError:
            pass

        subprocess.run(configure, cwd=build_dir, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "-j", str(os.cpu_count() or 2)],
            cwd=build_dir,
            check=True,
        )


setup(
    packages=["dmabeam"],
    package_dir={"": "python"},
    ext_modules=[CMakeExtension("dmabeam._core")],
    cmdclass={"build_ext": CMakeBuild},
)
