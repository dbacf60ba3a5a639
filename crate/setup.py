"""Builds the qfock_py extension by delegating to cargo.

Neither maturin nor setuptools-rust is assumed; the extension is a plain
cdylib renamed to the import name.  Use
`pip install -e . --no-build-isolation`.
"""

import pathlib
import shutil
import subprocess

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

ROOT = pathlib.Path(__file__).resolve().parent


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.run(
            [
                "cargo",
                "build",
                "--release",
                "-p",
                "qfock-py",
                "--features",
                "extension-module",
            ],
            check=True,
            cwd=ROOT,
        )
        built = ROOT / "target" / "release" / "libqfock_py.so"
        out = pathlib.Path(self.get_ext_fullpath(ext.name))
        out.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built, out)


setup(
    ext_modules=[Extension("qfock_py", sources=[])],
    cmdclass={"build_ext": CargoBuildExt},
)
