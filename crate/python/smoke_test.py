"""Smoke test for the qdisc_py extension.

Build and run from the repository root:

    cargo build --release -p qdisc-py
    cp target/release/libqdisc_py.so python/qdisc_py.so
    python3 python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import qdisc_py as qd


def main():
    f = qd.Fun("z' * z")
    assert str(f) == "q^2*z*z' + (1-q^2)", str(f)
    assert qd.Fun("z' * f0").is_zero()

    g = qd.Uq("E").act(qd.Fun("f0"))
    assert str(g) == "(-q^(1/2)/(1-q^2))*z*f0", str(g)
    assert json.loads(g.to_json())["fin"][0]["j"] == 1
    assert qd.Fun.from_json(g.to_json()) == g

    assert qd.Fun("f0").eta() == "1"
    assert abs(qd.eval_scalar(qd.Fun("f0").nu(), 0.5) - 0.75) < 1e-15

    om = qd.Uq.casimir()
    assert om.star() == om and om.antipode() == om

    assert qd.casimir_check("[1, 0, 1-q^2]")
    assert qd.spans(2)

    s = qd.spectrum(0.5, 400)
    assert abs(s.c1 - 4 / 9) < 0.01 and abs(s.c2 - 4) < 0.01, (s.c1, s.c2)
    assert abs(sum(s.weights) - 0.75) < 1e-10

    try:
        qd.spectrum(2.0, 40)
    except ArithmeticError:
        pass
    else:
        raise AssertionError("q = 2 accepted")

    code, out, _ = qd.run_cli(["verify"])
    assert code == 0, out
    print("smoke test ok")


if __name__ == "__main__":
    main()
