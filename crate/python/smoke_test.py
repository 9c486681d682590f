"""Smoke test for the `setfn` extension module.

Build and install first:  pip install ./crates/python
Then run:                 python python/smoke_test.py
"""

from fractions import Fraction

import setfn


def main() -> None:
    iou = setfn.SetFunction.iou(3, [1])
    assert iou.m == 3
    assert Fraction(iou.evaluate([1, 2])) == Fraction(1, 2)
    assert Fraction(iou.marginal_gain([1], 3)) == Fraction(-1, 2)

    cert = setfn.check_submodular(iou)
    assert cert is not None, "IoU should not be submodular"
    assert (cert["A"], cert["B"], cert["x"]) == ([1], [1, 2], 3)
    assert Fraction(cert["gap"]) == Fraction(-1, 3)
    assert setfn.verify_certificate(iou, cert)

    lattice = setfn.check_submodular(iou, mode="lattice")
    assert (lattice["A"], lattice["B"]) == ([1, 2], [1, 3])
    witness = setfn.witness_from_lattice_violation(iou, lattice)
    assert abs(float(witness["deficit"]) - 1 / 6) < 1e-12

    neg = setfn.SetFunction.neg_iou(3, [1, 2])
    assert setfn.check_submodular(neg) is not None
    assert setfn.check_submodular(setfn.SetFunction.cardinality(5)) is None
    assert setfn.check_submodular(setfn.SetFunction.truncation(5, 2), workers=2) is None

    value = setfn.lovasz_evaluate(iou, [1.0, 0.5, -0.25])
    assert abs(value - (1 - 0.25 + 0.25 / 6)) < 1e-12
    probe = setfn.probe_convexity(iou, samples=1000, seed=0)
    assert probe is not None and probe["source"] == "indicator-sweep"

    assert Fraction(setfn.closed_form_r_outside(1, 1, 2)) == Fraction(-1, 3)
    assert Fraction(setfn.closed_form_r_inside(2, 3)) == Fraction(1, 6)
    assert setfn.direct_r(3, [1], [1], [1, 2], 3) == "-1/3"
    configs = setfn.enumerate_counterexamples(3, "outside-yb")
    assert len(configs) == 6 and all(Fraction(c["r"]) < 0 for c in configs)

    p11 = setfn.refute_property11(1)
    assert (p11["Y"], p11["B"], p11["A"], p11["n_B"], p11["n_A"]) == ([1], [], [1], 1, 0)

    table = setfn.SetFunction.from_json('{"kind":"table","m":2,"values":["0","1","1","1"]}')
    assert setfn.check_submodular(table) is None

    code, out, _ = setfn.run_cli(["check", "--builtin", "iou", "--m", "3", "--y", "1"])
    assert code == 1 and "certificate.gap: -1/3" in out

    print("setfn smoke test passed")


if __name__ == "__main__":
    main()
