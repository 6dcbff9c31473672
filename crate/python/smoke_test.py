"""Smoke test for the varietylab_py extension module.

Build first:
    cargo build -p varietylab-py --release
    cp target/release/libvarietylab_py.so python/varietylab_py.so
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import varietylab_py as vl


def main():
    assert vl.normalize("xyx") == "yxO"
    assert vl.decide("IS", "xyz=zOxyzOO")
    assert not vl.decide("M", "xO=xx")
    assert len(vl.varieties()) == 16
    assert len(vl.lattice_covers()) == 25
    assert vl.leq("T", "IS")

    m = vl.Algebra.builtin("M")
    assert m.check_axioms()
    assert m.satisfies("xO=xx") == {"x": "b"}
    assert m.satisfies("OOO=O") is None
    assert m.variety() == "M"

    two_b = vl.Algebra.builtin("2b")
    assert two_b.check_axioms("IZ")
    assert vl.Algebra.from_text(two_b.to_text()).is_isomorphic(two_b)

    counts = [len(vl.enumerate(n)) for n in (1, 2, 3)]
    assert counts == [1, 2, 6], counts
    assert len(vl.enumerate(2, "IZ")) == 3

    for text in vl.shipped_script_texts():
        vl.replay(text)
    try:
        vl.replay("not a script")
    except ValueError:
        pass
    else:
        raise AssertionError("bad script accepted")

    ok, report = vl.run_acceptance(jobs=2)
    print(report.splitlines()[-1])
    assert ok
    print("smoke test passed")


if __name__ == "__main__":
    main()
