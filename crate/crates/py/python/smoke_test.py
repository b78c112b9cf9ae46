"""Smoke test for the compiled `oppo` extension.

Build with `cargo build -p oppo-py --release`, copy
`target/release/liboppo.so` next to this file as `oppo.so`, then run
`python3 smoke_test.py` (or `pytest smoke_test.py`).
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import oppo  # noqa: E402


def test_invariant_factors():
    assert oppo.invariant_factors([[2, 0], [0, 3]]) == ["1", "6"]
    assert oppo.invariant_factors([[0, 0]]) == []


def test_plane_over_f2():
    tables = dict(oppo.reduced_homology("GL", 1, 2))
    assert tables["building"] == [(1, "Z^8")]
    assert [d for d, _ in tables["opposition"]] == [1]


def test_ranges():
    thresholds, form = oppo.stability_range("SL", "sah", 6)
    assert thresholds[1:] == [2 * k - 1 for k in range(1, 7)]
    assert form == "n >= 2k-1"
    assert oppo.stability_range("U", "vdk", 6)[1] == "n >= 2k"


def test_verify_geometry():
    code, text = oppo.verify("GL", 1, 2, suites=["geometry", "sphericity"])
    report = json.loads(text)
    assert code == 0
    assert report["status"] == "PASS"
    assert all(c["verified_range"] for s in report["suites"] for c in s["claims"])


def test_bad_series():
    try:
        oppo.reduced_homology("XY", 1, 2)
    except ValueError:
        return
    raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
