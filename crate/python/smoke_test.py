"""Smoke test for the pyslidets extension module.

Build and install first:  pip install --no-build-isolation -e crates/slidets-py
"""

import json
import random

import pyslidets


def main():
    names = pyslidets.patterns()
    assert len(names) == 22 and "increasing_sequence" in names

    peak = pyslidets.properties("peak")
    assert peak["reverse"] == "peak" and peak["one_inflexion"] and not peak["inflexion_free"]

    dec = pyslidets.classify("dec_seq")
    assert len(dec["triples"]) == 5
    assert sorted(dec["representatives"]) == ["(PRE,FAC,SUF)", "(PRE,OUT,SUF)"]

    x = pyslidets.Series.parse("3 1 3 3 2 1 1 2 2 2 4 4 3 1 2 2")
    r = pyslidets.slide_check("inc_seq", "surf", 10, x)
    assert r["values"] == [7, 15, 11, 11, 11, 14, 14], r
    assert (r["low"], r["up"]) == (7, 15)
    assert r["values"] == pyslidets.oracle("inc_seq", "surf", 10, x)

    fwd, bwd, total = pyslidets.prefix_profile("inc_seq", "surf", x)
    assert fwd[len(x)] == total == bwd[1]

    rng = random.Random(0)
    for _ in range(200):
        s = pyslidets.Series([rng.randint(-5, 5) for _ in range(rng.randint(2, 30))])
        m = rng.randint(2, len(s))
        for name in ("peak", "gorge", "dec_seq", "zigzag", "plain"):
            got = pyslidets.slide_check(name, "one", m, s)["values"]
            assert got == pyslidets.oracle(name, "one", m, s), (name, s, m)

    model = json.loads(pyslidets.reformulate("gorge", "one", 3, 8))
    assert model["equation"] == "plain" and len(model["variables"]) == 3 * 8 + 6 + 3

    try:
        pyslidets.slide_check("gorge", "max", 2, x)
    except ValueError as e:
        assert "not in catalog" in str(e)
    else:
        raise AssertionError("gorge/max should be rejected")

    print("pyslidets smoke test passed")


if __name__ == "__main__":
    main()
