"""Smoke test for the discspace Python bindings.

Build and install first:  pip install --no-build-isolation ./crates/python
"""

import json
import math

import discspace


def main():
    x = discspace.Space("qs:1")
    assert str(x.normalize()) == "bmoa" and x.kind == "qs"

    v = discspace.superposition_class("qs:0.5", "dt:4,2.2")
    assert v["class"] == "open", v
    v = discspace.superposition_class(discspace.Space("bmoa"), "dt:1.5,0.5")
    assert (v["class"], v["citation"]) == ("constant", "Thm 1(a)"), v

    d = discspace.decide("bmoa", "hardy:1", discspace.Symbol.polynomial([1, 2, 3]))
    assert (d["verdict"]["class"], d["answer"]) == ("order1type0", "yes"), d
    assert discspace.decide("bmoa", "hardy:1", discspace.Symbol.exp())["answer"] == "no"
    assert discspace.includes("besov:3", "bloch")["verdict"] == "in"

    sym = discspace.Symbol.exp_of_square().classify()
    assert sym["class"] == "order2finite" and abs(sym["order"]["value"] - 2) < 0.1, sym

    f = discspace.Function.binomial(0.5)
    z = complex(0.3, -0.2)
    assert abs(f(z) - (1 - z) ** -0.5) < 1e-12
    assert discspace.member("bergman:2,0", f) == "in"
    assert discspace.member("hardy:2", f) == "out"
    rep = discspace.norm("bergman:2,0", discspace.Function.polynomial([1, 0, 1]), ladder_depth=10)
    assert rep["classification"] == "converges"
    assert abs(rep["estimate"] - math.sqrt(1 + 1 / 3)) < 1e-6, rep["estimate"]

    w = discspace.Function.from_json('{"type":"lacunary","family":"besov_witness","params":{"p":6}}')
    assert discspace.member("besov:6", w) == "in"
    assert discspace.member("qs:0.2", w) == "out"

    code, out, err = discspace.cli(["decide", "--from", "bloch", "--to", "dt:3,2"])
    assert code == 0 and json.loads(out)["verdict_class"] == "constant", (code, out, err)
    code, out, err = discspace.cli(["witness", "girela"])
    assert code == 2 and json.loads(err)["error"] == "not-constructible"

    try:
        discspace.Space("qs:-1")
    except discspace.DiscspaceError as e:
        assert "nonnegative" in str(e)
    else:
        raise AssertionError("negative s accepted")

    results = discspace.run_suite([6, 8])
    assert [r["pass"] for r in results] == [True, True], results
    print("python smoke test passed")


if __name__ == "__main__":
    main()
