#!/usr/bin/env python3
"""Smoke test for the bvslab_py extension module.

Builds (or reuses) the cdylib from crates/py, imports it, and asserts a
handful of exact values end to end. Run from the repository root:

    python3 python/smoke_test.py
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_module() -> Path:
    subprocess.run(
        ["cargo", "build", "-p", "bvslab-py"],
        cwd=REPO,
        check=True,
    )
    lib = REPO / "target" / "debug" / "libbvslab_py.so"
    if not lib.exists():  # macOS fallback
        lib = REPO / "target" / "debug" / "libbvslab_py.dylib"
    if not lib.exists():
        sys.exit("built library not found under target/debug")
    stage = Path(tempfile.mkdtemp(prefix="bvslab_py_"))
    shutil.copy(lib, stage / "bvslab_py.so")
    return stage


def main() -> None:
    sys.path.insert(0, str(build_module()))
    import bvslab_py as bvs

    # minimal relaxation constant on the 5-point reciprocal window
    result = bvs.minimal_s("e2@2..6", 1)
    assert result["s_min"] == "2", result
    assert result["witness_x"] == "1/2" and result["witness_y"] == "1/4", result

    # the three bundled non-contractivity witnesses, exact
    expected = {
        "e2": ("1/2", "1/3", "2", "1/2"),
        "e6": ("0", "3", "1/2", "1/3"),
        "e9@{0,1,2,4,5}": ("4", "5", "2", "1"),
    }
    for spec, (x, y, lhs, rhs) in expected.items():
        v = bvs.contraction(spec, spec.split("@")[0], "banach")
        assert not v["passed"], (spec, v)
        assert (v["witness_x"], v["witness_y"], v["lhs"], v["rhs"]) == (x, y, lhs, rhs), (spec, v)

    # the whole bundled claim set passes
    report = bvs.corpus_run("all")
    assert report["failed"] == 0, report
    assert report["passed"] >= 17, report

    # Picard orbit with its diagnostics
    orbit = bvs.iterate_orbit("e4", "e4", "1", 10)
    assert orbit["points"] == ["1", "1/2", "0"], orbit
    assert orbit["status"] == "fixed-point" and orbit["fixed_index"] == 2, orbit
    assert orbit["s_seq"] == ["7", "1"], orbit
    assert orbit["fixed_points"] == ["0"], orbit

    # probe both directions of the asymptotic-uniformity implication
    supported = bvs.suzuki("e4", "e4", "1", "s2", ["1/4", "1/2"], 40, s="2")
    assert all(f["supported"] and f["delta"] == f["eps"] for f in supported), supported
    refuted = bvs.suzuki("e8", "e8", "1", "s2", ["1/4"], 40, s="2")
    assert not refuted[0]["supported"], refuted
    assert refuted[0]["refuted_candidates"] == 42, refuted

    # escape-map demo and its rejection control
    demo = bvs.completeness_demo()
    assert demo["verdict"] == "pass" and demo["ordered_pairs"] == 870, demo
    assert demo["control_rejected"] and demo["control_zero_gap_at"] == "0", demo

    # ad-hoc table from Python data
    table = bvs.Table(
        ["a", "b", "c"],
        [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]],
    )
    assert table.check_bvs(1, "1")
    assert table.minimal_s(1) == "1"
    assert table.distance("a", "c") == "1"

    # infeasibility certificate from the exact search
    search = bvs.reich_search("e2@2..8", "e2")
    assert not search["feasible"], search
    assert ["1/2", "1/3"] in [list(pair) for pair in search["certificate"]], search

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
