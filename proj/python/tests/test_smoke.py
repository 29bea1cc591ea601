import pytest

import pslqe

TRANSCENDENTAL = [1, -5, 4, -16, 1]


def positive_first(m):
    lead = next(v for v in m if v)
    return [v if lead > 0 else -v for v in m]


def test_plan_reports_both_thresholds():
    p = pslqe.plan("example:1", "1e-6", "16")
    assert p["eps1"].startswith("2.60") and p["eps1"].endswith("e-11")
    assert p["n"] == 5


def test_find_recovers_known_relation():
    r = pslqe.find("example:1", eps="1e-6", G=16, digits=60)
    assert r["status"] == "found"
    assert r["exit_code"] == 0
    assert positive_first(r["m"]) == TRANSCENDENTAL


def test_find_without_budget_is_unbounded():
    r = pslqe.find("example:1", eps2="1e-20", digits=60)
    assert r["exit_code"] == 2


def test_minpoly_small():
    r = pslqe.minpoly("sqrt(2)+sqrt(3)", 4, "1e-20", 10, digits=60)
    assert r["m"] == [1, 0, -10, 0, 1]


def test_verify_accepts_and_rejects():
    assert pslqe.verify("example:1", TRANSCENDENTAL, digits=60)["is_relation"]
    assert not pslqe.verify("example:1", [1, -5, 4, -16, 2], digits=60)["is_relation"]


def test_sweep_rows():
    rows = pslqe.sweep("example:1", 5, 7, 16, reference=TRANSCENDENTAL, digits=60, jobs=1)
    assert [r["i"] for r in rows] == [5, 6, 7]
    assert all(r["outcome"] == "correct" for r in rows)


def test_infeasible_plan_raises():
    with pytest.raises(pslqe.InfeasiblePlan):
        pslqe.plan("example:1", "100", "1")


def test_bad_input_raises():
    with pytest.raises(ValueError):
        pslqe.find("powers:", eps="1e-6", G=16)


def test_selftest_passes():
    doc = pslqe.selftest(digits=30)
    assert doc["passed"]
