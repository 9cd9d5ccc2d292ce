"""Smoke test for the dlvar_py extension module.

Build the module with `cargo build --release -p dlvar-py`, copy or symlink
target/release/libdlvar_py.so to dlvar_py.so somewhere on PYTHONPATH, then run
this script.
"""

import json
import sys

import dlvar_py


def main() -> int:
    p = dlvar_py.Params(2, 2, 1, 2)
    assert p.count_points() == 16
    assert p.count_points(m=3) == 160
    assert p.predict_count(3) == 160
    assert p.zeta() == "(1+2t)^4 / (1-4t)^2"
    assert p.dims() == {1: 4, 2: 2}

    census = p.census()
    assert len(census) == 4
    assert sum(2 ** ((p.n * (row["r_chi"] + row["d_chi"])) // 2) for row in census) == 16
    m_seq, h_seq = p.howe_data(0)
    assert len(m_seq) == len(h_seq)

    mixed = dlvar_py.Params(2, 2, 1, 3, backend="mixed")
    assert mixed.count_points() == dlvar_py.Params(2, 2, 1, 3).count_points()

    try:
        dlvar_py.Params(2, 2, 2, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("k must be coprime to n")

    try:
        dlvar_py.Params(2, 2, 1, 3).count_points(m=2, budget=10)
    except dlvar_py.BudgetExceeded:
        pass
    else:
        raise AssertionError("budget not enforced")

    code, report = dlvar_py.run(["verify", "maximality"])
    assert code == 0
    assert json.loads(report)["pass"] is True

    print("dlvar_py smoke test passed:", p, p.zeta())
    return 0


if __name__ == "__main__":
    sys.exit(main())
