import os
import shutil
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
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source_dir),
                "-B", str(build_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DDOSLAB_PYTHON=ON",
                "-DDOSLAB_TESTS=OFF",
                f"-DPython_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        jobs = str(os.cpu_count() or 2)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_doslab", "-j", jobs],
            check=True,
        )

        built = list(build_dir.glob("_doslab*.so")) + list(build_dir.glob("_doslab*.pyd"))
        if not built:
            raise RuntimeError("cmake did not produce the _doslab module")
        shutil.copy2(built[0], out_path)


setup(
    ext_modules=[CMakeExtension("doslab._doslab")],
    cmdclass={"build_ext": CMakeBuild},
)
