import pytest
from gmpy2 import mpz

from degmst.cutcount import (MalformedTable, RootTable, TableBudgetExceeded, WeightDomain, check_table_budget,
                             decide, sample_isolation_weights)
from degmst.decomp import make_nice, trivial_decomposition
from degmst.engine_tw import solve_tw
from degmst.solver import make_runner, solve

from conftest import complete, inst_sets, path


def test_isolation_weights_deterministic_and_in_range():
    inst = inst_sets(complete(5), [[1, 2, 3]] * 5)
    a, b = sample_isolation_weights(inst, 42), sample_isolation_weights(inst, 42)
    assert a == b and a.Z == 20
    assert all(0 <= w <= 20 for w in a.values)
    assert sample_isolation_weights(inst, 43) != a


def test_domain_pack_roundtrip():
    dom = WeightDomain(4, 5, 2, 3)
    cells = {(0, 0, 0): 1, (3, 2, 7): 2, (2, 3, 15): 3}
    assert dom.nonzero_cells(dom.pack(cells)) == cells


def test_domain_shift_drops_overflow():
    dom = WeightDomain(3, 2, 1, 1)
    x = dom.pack({(0, 0, 0): 1, (2, 0, 0): 1, (0, 1, 0): 1})
    assert dom.nonzero_cells(dom.shift(x, 1, 2)) == {(1, 1, 2): 1}


def test_domain_reduce_is_mod4():
    dom = WeightDomain(2, 1, 0, 0)
    x = dom.pack({(1, 0, 1): 3})
    assert dom.nonzero_cells(x + x) == {(1, 0, 1): 2}
    assert dom.nonzero_cells(x * 4) == {}


def test_decide_finds_smallest_w1():
    dom = WeightDomain(3, 3, 2, 4)
    x = dom.pack({(2, 3, 1): 2, (2, 1, 5): 2, (2, 0, 2): 1})
    assert decide(RootTable(dom, {(): x}), 4) == (True, (1, 5))
    assert decide(RootTable(dom, {(): x}), 0) == (False, None)
    assert decide(RootTable(dom, {}), 4) == (False, None)


def test_decide_rejects_non_empty_index():
    dom = WeightDomain(2, 1, 0, 0)
    with pytest.raises(MalformedTable):
        decide(RootTable(dom, {(0,): dom.one}), 0)


def test_decide_k2():
    inst = inst_sets(path(2), [[1], [1]])
    nice = make_nice(inst.graph, trivial_decomposition(inst.graph))
    iso = sample_isolation_weights(inst, 9)
    root = solve_tw(inst, nice, iso, 0)
    assert decide(root, 0) == (True, (0, iso.values[0]))


def test_min_cost_k3():
    inst = inst_sets(complete(3), [[1, 2]] * 3, (1, 2, 3), 10)
    td = trivial_decomposition(inst.graph)
    res = solve(inst, "tw", td=td, reps=20, seed=1, want_min_cost=True)
    assert res.answer == "yes" and res.min_cost == 3


def test_weighted_bound_too_small():
    inst = inst_sets(complete(3), [[1, 2]] * 3, (1, 2, 3), 2)
    res = solve(inst, "tw", td=trivial_decomposition(inst.graph), reps=20, seed=1)
    assert res.answer == "no" and res.reps == 20


def test_screen_rejection_reports_zero_reps():
    inst = inst_sets(path(3), [[1]] * 3)
    res = solve(inst, "tw", td=trivial_decomposition(inst.graph), reps=5, seed=0)
    assert res.answer == "no" and res.reps == 0 and res.stats["screen"] == "maximum degree sum below 2n-2"


def test_table_budget(monkeypatch):
    import degmst.cutcount as cc
    dom = WeightDomain(4, 4, 0, 0)
    check_table_budget(10, dom, 0)
    monkeypatch.setattr(cc, "TABLE_BYTES_LIMIT", 16)
    with pytest.raises(TableBudgetExceeded):
        check_table_budget(10, dom, 3)


def test_amplification_is_seeded():
    inst = inst_sets(complete(4), [[1, 2, 3]] * 4)
    td = trivial_decomposition(inst.graph)
    a = solve(inst, "tw", td=td, reps=3, seed=77)
    b = solve(inst, "tw", td=td, reps=3, seed=77)
    assert a.witness == b.witness and a.seed == 77


def test_runner_needs_witness():
    from degmst.solver import UsageError
    inst = inst_sets(path(2), [[1], [1]])
    with pytest.raises(UsageError):
        make_runner("tw", inst)
    with pytest.raises(UsageError):
        make_runner("ctw", inst)
