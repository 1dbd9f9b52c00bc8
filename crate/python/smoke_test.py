"""Smoke test for the resum_py extension.

Build first:
    cargo build --release -p resum-py --features extension-module
then run:
    python3 python/smoke_test.py

If resum_py is not installed (e.g. via maturin), the freshly built shared
library is loaded from target/.
"""

import importlib.util
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import resum_py

        return resum_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libresum_py.so", "libresum_py.dylib", "resum_py.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                spec = importlib.util.spec_from_file_location("resum_py", path)
                module = importlib.util.module_from_spec(spec)
                spec.loader.exec_module(module)
                return module
    sys.exit("resum_py not found; build it with "
             "`cargo build --release -p resum-py --features extension-module`")


def main():
    r = load()

    f = r.PrimeField(5)
    assert f.binomial(4, 2) == 1
    assert f.inverse(2) == 3
    assert f.pow(2, 4) == 1
    try:
        r.PrimeField(6)
        raise AssertionError("composite modulus accepted")
    except ValueError as e:
        assert "6 is not prime" in str(e)

    assert r.restricted_sumset(5, [1, 2], [0, 1, 2]) == [1, 2, 3]
    assert r.sumset(7, [0, 1], [0, 1, 2]) == [0, 1, 2, 3]
    assert r.anr_bound(5, 2, 3) == 3
    assert r.eh_bound(7, 3) == 3
    assert r.cd_bound(7, 2, 3) == 4

    w1 = r.extremal_weights(5, [1, 2])
    w2 = r.extremal_weights(5, [0, 1, 2])
    assert (w1, w2) == ([4, 1], [3, 4, 3])
    assert r.excess_index(5, [1, 2], w1) == 1
    assert r.power_sum(5, [0, 1, 2], w2, 2) == 1
    support, w = r.induced_weights(5, [1, 2], w1, [0, 1, 2], w2)
    assert (support, w) == ([1, 2, 3], [2, 1, 2])
    assert [r.gamma_convolution(5, [1, 2], w1, [0, 1, 2], w2, n) for n in range(3)] == [0, 0, 4]

    cert = r.certify_anr(5, [1, 2], [0, 1, 2])
    assert cert.claimed_bound == 3 and cert.C == [1, 2, 3] and cert.e_C == 2
    assert cert.verify().passed
    text = cert.to_json()
    assert r.verify_json(text).passed
    data = json.loads(text)
    data["gamma"][2] = (data["gamma"][2] + 1) % 5
    report = r.verify_json(json.dumps(data))
    assert not report.passed and report.first_failure is not None

    eh = r.certify_eh(7, [0, 1, 2])
    assert eh.route == "eh-corollary" and eh.claimed_bound == 3

    s = r.sweep(7, "anr")
    assert s.ok and s.violations == [] and s.pairs_checked > 0
    try:
        r.sweep(13, "anr")
        raise AssertionError("over-budget sweep accepted")
    except OverflowError:
        pass
    assert r.sweep(13, "anr", seed=1, samples=100).ok

    print("smoke test passed:", s)


if __name__ == "__main__":
    main()
