"""Ledger semantics: billing, budgets, snapshots, and privileged reads."""

import pytest

from qtri import (
    BudgetExceededError,
    Graph,
    QueryOracle,
    StepTag,
    default_budget,
    enumerate_triangles,
    neighborhood,
    path2_count,
    threshold_graph,
    triangle_count,
)

K3 = Graph(3, [(1, 2), (2, 3), (1, 3)])


def test_query_returns_bit_and_bills():
    o = QueryOracle(K3)
    assert o.query(1, 2, StepTag.STEP1) == 1
    assert o.report().total == 1
    empty = QueryOracle(Graph(4))
    assert empty.query(1, 2, StepTag.STEP1) == 0
    assert empty.report().total == 1


def test_query_additivity():
    o = QueryOracle(Graph(6))
    pairs = [(a, b) for a in range(1, 6) for b in range(a + 1, 7)][:10]
    for a, b in pairs:
        o.query(a, b, StepTag.STEP2)
    rep = o.report()
    assert rep.total == rep.classical == 10
    assert rep.per_step["Step2"] == 10


def test_query_rejects_loops_and_range():
    o = QueryOracle(K3)
    with pytest.raises(ValueError):
        o.query(2, 2, StepTag.STEP1)
    with pytest.raises(ValueError):
        o.query(1, 9, StepTag.STEP1)
    assert o.report().total == 0  # failed probes are not billed


def test_charge_examples():
    o = QueryOracle(K3)
    o.charge(26, StepTag.STEP2)
    assert o.report().charged == 26
    o.charge(0, StepTag.STEP2)
    assert o.report().charged == 26
    o.query(1, 2, StepTag.STEP2)
    rep = o.report()
    assert rep.total == 27 and rep.classical == 1
    assert rep.per_step["Step2"] == 27
    with pytest.raises(ValueError):
        o.charge(-1, StepTag.STEP2)


def test_budget_exceeded():
    o = QueryOracle(Graph(8), budget=3)
    o.charge(3, StepTag.STEP9)
    with pytest.raises(BudgetExceededError):
        o.query(1, 2, StepTag.STEP9)


def test_default_budget_grows():
    assert default_budget(8) < default_budget(64) < default_budget(512)


def test_fresh_report_all_zero():
    rep = QueryOracle(K3).report()
    assert rep.total == rep.classical == rep.charged == 0
    assert all(v == 0 for v in rep.per_step.values())
    assert set(rep.per_step) == {f"Step{i}" for i in range(1, 11)} | {"Verify"}


def test_report_is_a_snapshot():
    o = QueryOracle(K3)
    o.query(1, 2, StepTag.STEP1)
    rep = o.report()
    o.query(1, 3, StepTag.STEP1)
    o.charge(5, StepTag.STEP9)
    assert rep.total == 1
    assert rep.per_step["Step1"] == 1
    assert o.report().total == 7


def test_totals_identity():
    o = QueryOracle(K3)
    o.query(1, 2, StepTag.STEP1)
    o.charge(4, StepTag.STEP2)
    rep = o.report()
    assert rep.total == rep.classical + rep.charged == sum(rep.per_step.values())


def test_privileged_reads_do_not_bill():
    o = QueryOracle(Graph(10, [(1, 2), (2, 3), (1, 3), (4, 5)]))
    g = o.hidden
    neighborhood(g, 1)
    path2_count(g, 1, 2)
    triangle_count(g)
    enumerate_triangles(g)
    threshold_graph(g, 2)
    list(g.edges())
    assert o.report().total == 0


def test_report_json_shape():
    o = QueryOracle(K3, budget=99)
    o.query(1, 2, StepTag.STEP1)
    obj = o.report().to_json()
    assert set(obj) == {"classical", "charged", "total", "per_step", "budget"}
    assert obj["budget"] == 99
    assert obj["per_step"]["Step1"] == 1
