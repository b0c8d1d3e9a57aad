"""Smoke test for the depthtower_py extension module.

Run from the repository root after building the extension:

    cargo build --release -p depthtower-py --features extension-module
    cp target/release/libdepthtower_py.so crates/python/python/depthtower_py.so
    python3 crates/python/python/smoke_test.py
"""
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, HERE)
DATA = os.path.join(HERE, "..", "..", "..", "data")

import depthtower_py as dt


def main():
    t = dt.Tower.from_groups(["(1 2 3 4)", "(1 2)"], ["(1 2 3)", "(2 3 4)"], ["(1 2)(3 4)", "(1 3)(2 4)"])
    assert t.dims == (24, 12, 4), t.dims
    assert t.is_rd3() and t.is_ld3()
    cert = t.quasibases("right")
    assert cert["side"] == "right"
    assert t.verify_certificate(cert)

    s3 = dt.Tower.from_file(os.path.join(DATA, "s3_c2.toml"))
    assert not s3.is_rd3()
    assert s3.quasibases("right") is None
    assert not dt.group_criterion(["(1 2 3)", "(1 2)"], ["(1 2)"], ["(1 2)"])

    q = dt.Tower.from_file(os.path.join(DATA, "quaternions.toml"))
    assert q.is_rd3() and q.is_ld3()
    print(q, q.is_d2())

    triv = dt.Tower.from_file(os.path.join(DATA, "s3_a3_trivial.toml"))
    rep = triv.structures(["coring"])
    assert rep["coring"]["passed"]

    try:
        dt.Tower.from_file(os.path.join(DATA, "bad_cycle.toml"))
    except ValueError as e:
        assert "line 5" in str(e)
    else:
        raise AssertionError("bad cycle parsed")

    f16 = dt.FieldTower(2, 4)
    assert [d for d, _ in f16.subfields] == [1, 2, 4]
    assert f16.jb_roundtrip()["entries"]

    c = dt.census(6)
    assert c["summary"]["violations"] == 0
    print("census towers:", len(c["records"]))
    print("smoke test passed")


if __name__ == "__main__":
    main()
