"""Smoke test for the zetalab Python module.

    pip install --no-build-isolation ./crates/python
    python3 python/smoke_test.py
"""

from fractions import Fraction
from pathlib import Path

import zetalab

EXAMPLES = Path(__file__).resolve().parent.parent / "crates" / "cli" / "examples"


def main():
    assert zetalab.valuation(Fraction(50, 3), 5) == 2
    assert zetalab.valuation("3/5", 5) == -1
    assert zetalab.newton_slopes(["1", "-1", "5"], 5) == [("0", 1), ("1", 1)]
    assert zetalab.newton_slopes([1, 0, 5], 5) == [("1/2", 2)]
    assert zetalab.p_local_snf([[2, 4], [6, 8]], 2) == ([1, 2], 0)
    assert zetalab.weighted_hodge_euler([(0, 0, 1), (1, 1, 1), (2, 2, 1)], 1) == 1

    nil = zetalab.EndoModule(3, [[0, 1], [0, 0]])
    assert nil.bockstein_char() is None
    assert nil.stable_bockstein_char()[0] == 0
    times_p = zetalab.EndoModule(5, [[5]])
    assert times_p.stable_bockstein_char() == (-1, 1)
    torsion = zetalab.EndoModule(2, [[1, 0], [4, 6]], [1, 3])
    assert torsion.stable_bockstein_char()[0] == torsion.uk_valuation()

    text = (EXAMPLES / "curated.json").read_text()
    e = zetalab.Gauge.from_json(text, "elliptic_a1")
    assert e.ord_at(1) == -1
    assert e.special_value(1) == "5/4"
    rep = e.verify(1)
    assert rep["verdict"] == "verified"
    assert (rep["lhs_exponent"], rep["mu_exponent"], rep["chi"]) == (-1, 1, 0)
    assert e.twist(1).verify(0)["mu_exponent"] == rep["mu_exponent"]

    gauges = dict(zetalab.Gauge.load_all(text))
    for name, g in gauges.items():
        lo, hi = g.default_weights()
        for r in range(lo, hi + 1):
            assert g.verify(r)["verdict"] == "verified", (name, r)

    reports = dict(zetalab.surfaces(text))
    assert reports["p2"]["beta_exponent"] == 0 and reports["p2"]["consistent"]

    try:
        zetalab.Gauge.from_json(text, "missing")
    except zetalab.ZetalabError:
        pass
    else:
        raise AssertionError("unknown gauge accepted")

    print(f"zetalab smoke test ok ({len(gauges)} gauges)")


if __name__ == "__main__":
    main()
