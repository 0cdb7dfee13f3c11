"""Smoke test for the reparam_py extension.

Imports an installed reparam_py if there is one; otherwise builds the
extension with cargo and loads it from the target directory.
"""

import importlib.util
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
MODELS = ROOT / "crates" / "core" / "models"


def load():
    try:
        import reparam_py

        return reparam_py
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "-p", "reparam-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "debug" / "libreparam_py.so"
    tmp = pathlib.Path(tempfile.mkdtemp()) / "reparam_py.so"
    shutil.copy(lib, tmp)
    spec = importlib.util.spec_from_file_location("reparam_py", tmp)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    rp = load()
    lv = rp.Model((MODELS / "lotka_volterra.model").read_text())
    assert lv.states == ["x1", "x2"], lv.states
    assert lv.params == ["a", "b", "c", "d"]
    (eq,) = lv.io_equations()
    print("LV IO-equation:", eq)
    assert sorted(lv.identifiable_generators()) == ["a", "c", "d"]
    assert rp.verify(lv, lv)
    print("LV Lie derivative of x1:", lv.lie_derivative("x1"))

    cube = rp.Model((MODELS / "cube_root.model").read_text())
    out = rp.reparametrize(cube)
    print(out.to_text())
    assert out.equations() == ["z' = (z*h + 1)/3", "y = -z^3*h"], out.equations()

    bilinear = rp.Model((MODELS / "bilinear.model").read_text())
    report = rp.pipeline(bilinear, fix={"p2": "1"})
    assert report["error"] is None, report["error"]
    assert report["evaluation"]["assignment"] == [{"name": "p2", "expr": "1/1"}]
    assert report["verification"]["vanishes"] and report["verification"]["proportional"]
    print("bilinear:", report["reparametrized_model"]["equations"])

    pole = rp.Model((MODELS / "first_order_pole.model").read_text())
    realized = rp.poly_realize(pole)
    assert realized.equations() == ["z' = -z^4*u + z^4", "y = z*u"], realized.equations()
    print("polynomial realization:", realized.equations())

    inv = rp.Model("states: x1, x2\ninputs: u\noutputs: y\nx1' = u/x2 + 2*x1\nx2' = -2*x2\ny = u*x1\n")
    sub = inv.substitute(["z1", "z2"], ["z1*z2", "1/z2"])
    assert sub.equations() == ["z1' = u", "z2' = 2*z2", "y = z1*z2*u"], sub.equations()
    print("substitution:", sub.equations())

    try:
        rp.Model("states: x\noutputs: y\nx' = x\ny = x3\n")
    except rp.ReparamError as e:
        print("rejected:", e)
    else:
        raise AssertionError("undeclared symbol accepted")
    print("smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
