"""Smoke test for the tracecode_py extension module.

Uses an installed module when available, otherwise the library built by
`cargo build -p tracecode-py --release --features extension-module`.
"""

import importlib.util
import json
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        import tracecode_py

        return tracecode_py
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    built = root / "target" / "release" / "libtracecode_py.so"
    if not built.exists():
        sys.exit(f"extension not found; build it first ({built})")
    tmp = pathlib.Path(tempfile.mkdtemp()) / "tracecode_py.so"
    shutil.copy(built, tmp)
    spec = importlib.util.spec_from_file_location("tracecode_py", tmp)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    tc = load()

    f = tc.Field(3, 8, [2, 2, 2, 0, 1, 2, 0, 0, 1])
    assert f.order == 6561 and f.is_generator_primitive()
    a = f.power_of_root(820)
    assert f.case(a) == "C2_4divM_aInFp2"
    assert f.char_sums(a) == (3, 8)
    wd, cwe = f.enumerate(a)
    assert wd == {0: 1, 468: 720, 477: 2178, 486: 728, 495: 2196, 504: 738}
    assert cwe[(252, 225, 252)] == 1089
    assert f.predict(a) == (wd, cwe)
    a1, a2, a3, dist = f.dual(a)
    assert (a1, a2, dist) == (0, 0, "3")

    g = tc.Field(3, 3)
    x = [0, 1, 0]
    assert g.mul(x, g.inv(x)) == [1, 0, 0]
    assert g.trace([1, 0, 0]) == 0

    report = json.loads(tc.run(3, 6, "exp:91", "enumerate,predict,minimality", modulus=[2, 2, 1, 0, 2, 0, 1]))
    assert report["ok"] and report["d"] == 48 and report["predicted_match"]
    assert report["minimality"]["non_minimal_count"] == 0

    try:
        tc.Field(3, 3, [1, 0, 0, 1])
    except ValueError as e:
        assert "reducible" in str(e)
    else:
        raise AssertionError("reducible modulus accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
