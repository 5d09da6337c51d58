"""Smoke test for the cmub_eur extension module.

Build and install first, e.g.
    maturin build --release -m crates/python/Cargo.toml -o target/wheels
    pip install --force-reinstall target/wheels/cmub_eur-*.whl
then run `python python/smoke_test.py`.
"""

import csv
import io
import json
import math

import cmub_eur as ce


def close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b}"


def main():
    s = 1 / math.sqrt(2)
    bell = ce.QuantumState.pure(["A", "B"], [2, 2], [s, 0, 0, s])
    assert bell.labels == ["A", "B"] and bell.dims == [2, 2]
    close(bell.purity(), 1.0)
    close(ce.conditional_entropy(bell, ["A"], ["B"]), -1.0)
    close(ce.mutual_information(bell, ["A"], ["B"]), 2.0)
    close(ce.von_neumann_entropy(bell.partial_trace(["A"])), 1.0)

    report = ce.evaluate(bell, mub="pauli", partition="1,2,3")
    for key in ("lhs_uncertainty", "thm1_lower", "thm2_upper"):
        close(report[key], 0.0, 1e-7)

    back = ce.QuantumState.from_json(bell.to_json())
    close(back.rho()[0][3].real, 0.5)

    for d in (2, 3, 4, 5):
        mubs = ce.MubSet.for_dim(d)
        assert len(mubs) == d + 1 and mubs.verify()["passed"]
        for st in ce.random_states(d, "mixed", seed=7, count=5):
            close(mubs.collision_sum(st), st.purity() + 1.0)
    close(ce.u_cmubs(3, 1.0), 4 * math.log2(3) - 4 / 3, 1e-12)
    close(ce.l_cmubs(2, 1.0), 2.0, 1e-12)

    r = ce.example_report("example4", phi=2 * math.pi / 3, theta=2 * math.pi / 3)
    assert r["thm1_lower"] <= r["lhs_uncertainty"] + 1e-7 <= r["thm2_upper"] + 2e-7
    assert [m["m_t"] for m in r["per_memory"]] == [1, 2]

    rows = list(csv.DictReader(io.StringIO(ce.sweep_csv("example1", steps=9))))
    assert len(rows) == 9
    batch = ce.random_csv("example6", "pure", seed=42, count=10)
    assert batch == ce.random_csv("example6", "pure", seed=42, count=10)
    lhs = [float(row["lhs"]) for row in csv.DictReader(io.StringIO(batch))]
    assert lhs == sorted(lhs)

    checks = ce.self_check()
    assert checks and all(ok for _, ok, _ in checks)

    try:
        ce.evaluate(bell, partition="1|1,2")
    except ValueError as e:
        assert "assigned twice" in str(e)
    else:
        raise AssertionError("bad partition accepted")

    print(json.dumps({"checks": len(checks), "sweep_rows": len(rows), "status": "ok"}))


if __name__ == "__main__":
    main()
