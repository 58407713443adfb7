#!/usr/bin/env python3
"""Smoke test for the mackeykit_py extension module.

Builds nothing itself: expects `cargo build -p mackeykit-py` to have
produced the cdylib under target/. Run from the repository root:

    cargo build -p mackeykit-py && python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import sys
import tempfile


def load_module():
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libmackeykit_py.so", "mackeykit_py.so", "libmackeykit_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("cdylib not found; run `cargo build -p mackeykit-py` first")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="mackeykit_py_"))
    shutil.copy2(built, stage / "mackeykit_py.so")
    sys.path.insert(0, str(stage))
    import mackeykit_py

    return mackeykit_py


def main():
    mk = load_module()

    # Group combinatorics on S3.
    s3 = mk.Group.named("S3")
    assert s3.order() == 6
    assert not s3.is_abelian()
    subs = s3.subgroups()
    assert len(subs) == 6, subs
    assert [0] in subs and list(range(6)) in subs

    # Double cosets of a point stabilizer against itself: two classes.
    k = next(s for s in subs if len(s) == 2)
    reps = s3.double_cosets(k, k)
    assert len(reps) == 2 and reps[0] == 0, reps

    # The hom module between transitive permutation modules is free of
    # rank = number of double cosets; the span category hom is strictly
    # bigger (the surplus is exactly the ideal killed by linearization).
    assert s3.hom_rank(k, k) == len(reps) == 2
    basis = s3.omega_basis(k, k)
    assert len(basis) == 3, basis
    assert (0, k) in [(g, l) for g, l in basis]

    # Explicit multiplication tables work too, and named groups round
    # trip through theirs.
    c2 = mk.Group([[0, 1], [1, 0]])
    assert c2.order() == 2 and c2.is_abelian()
    assert mk.Group(s3.cayley()).order() == 6

    # Relations for nested subgroups die under linearization, over both
    # the integers and a field.
    a3 = next(s for s in subs if len(s) == 3)
    for ring in ("Z", "Q", "Fp:3"):
        assert s3.ideal_generator_vanishes(ring, a3, list(range(6)))
        assert s3.ideal_generator_vanishes(ring, [0], a3)

    # The 2-periodic complex over F_3: acyclic on all fixed points but not
    # equivariantly contractible.
    cp3 = mk.Complex.cp_example(3)
    assert cp3.is_gamma_acyclic()
    assert not cp3.is_contractible()
    assert cp3.homology([0], 0) == (0, [])
    assert cp3.homology([0], 1) == (0, [])
    doc = json.loads(cp3.to_json())
    assert doc["shape"] == {"periodic2": True}
    assert doc["group"] == {"name": "C3"}

    # Bad prime is rejected.
    try:
        mk.Complex.cp_example(2)
    except ValueError as e:
        assert "bad-prime" in str(e), e
    else:
        raise AssertionError("p=2 must be rejected")

    # Full verification battery on the smallest interesting input.
    report = json.loads(s3.suite("Fp:2", 1729))
    assert report["pass"] is True
    assert report["seed"] == 1729
    assert all(item["pass"] for item in report["items"])

    print(f"smoke test passed: {len(report['items'])} suite items green on S3/F2")


if __name__ == "__main__":
    main()
