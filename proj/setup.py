# The extension is built by the project's own CMake (SSM_BUILD_PYTHON=ON)
# so the Python module always links the exact same library as the CLI and
# the test binaries.
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        out.mkdir(parents=True, exist_ok=True)
        build = Path(self.build_temp).resolve()
        build.mkdir(parents=True, exist_ok=True)
        src = Path(__file__).resolve().parent
        subprocess.run(
            [
                "cmake",
                "-S", str(src),
                "-B", str(build),
                "-DSSM_BUILD_PYTHON=ON",
                "-DCMAKE_BUILD_TYPE=Release",
                f"-DPython3_EXECUTABLE={sys.executable}",
                f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out}",
            ],
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", str(build), "--target", "_core"], check=True
        )


setup(
    ext_modules=[CMakeExtension("symsquare._core")],
    cmdclass={"build_ext": CMakeBuild},
)
