import random

import pytest

from degmst.cutcount import FAULTS, InvariantViolation, sample_isolation_weights
from degmst.decomp import (LinearArrangement, arrangement_bags, arrangement_to_nice_path, make_nice,
                           path_decomposition, trivial_decomposition)
from degmst.engine_pw import (L_, R_, UP, PwIndexFamily, family_size, make_state, solve_ctw, solve_pw,
                              state_colour, state_f)
from degmst.engine_tw import solve_tw
from degmst.generators import connected_graphs, make_instance, random_arr, random_pkt
from degmst.solver import solve

from conftest import complete, cycle, graph, inst_sets, path, star
from helpers import check_root, prepare, root_cells


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_state_roundtrip(d):
    seen = set()
    for f in range(d + 1):
        for col in ((UP,) if f in (0, d) else (L_, R_)):
            s = make_state(f, col, d)
            assert state_f(s) == f and state_colour(s, d) == col
            seen.add(s)
    assert seen == set(range(2 * d))


def test_family_states_and_size():
    fam = PwIndexFamily((1, 2), (1, 3), (1, 2))
    assert fam.states(0) == [0, 1]
    assert fam.states(1) == [0, 1, 2, 3, 4]
    assert fam.size == 10 == family_size((1, 2), {1: 1, 2: 3}, {1: 1, 2: 2})
    for code in range(fam.size):
        assert fam.encode(fam.decode(code)) == code


def _path_td(G):
    arr = LinearArrangement(tuple(G.vertices))
    return path_decomposition(arrangement_bags(G, arr))


def test_root_matches_cut_counts_exhaustive():
    rng = random.Random(12)
    checked = 0
    for G in connected_graphs(6):
        if G.n < 2:
            continue
        inst = prepare(make_instance(G, rng, "mixed", max_weight=1, bound=9))
        if inst is None:
            continue
        nice = make_nice(G, _path_td(G))
        got, want = check_root(inst, lambda p, iso, cap: solve_pw(p, nice, iso, cap), rng.getrandbits(32))
        assert got == want
        checked += 1
    assert checked == 100


def test_pw_equals_tw_tables_at_root():
    rng = random.Random(21)
    for _ in range(40):
        gen = random_pkt(rng.randint(2, 8), rng.randint(1, 2), rng, "path")
        inst = prepare(make_instance(gen.graph, rng, "mixed", max_weight=2, bound=6))
        if inst is None:
            continue
        nice = make_nice(gen.graph, gen.td)
        iso = sample_isolation_weights(inst, rng.getrandbits(32))
        a = root_cells(solve_pw(inst, nice, iso, 6), inst.n)
        b = root_cells(solve_tw(inst, nice, iso, 6), inst.n)
        assert a == b


def test_pw_rejects_join_nodes():
    G = star(3)
    from degmst.decomp import TreeDecomposition
    td = TreeDecomposition({1: {1, 2}, 2: {1, 3}, 3: {1, 4}, 4: {1}}, ((4, 1), (4, 2), (4, 3)))
    nice = make_nice(G, td)
    inst = prepare(inst_sets(G, [[3], [1], [1], [1]]))
    with pytest.raises(ValueError):
        solve_pw(inst, nice, sample_isolation_weights(inst, 0), 0)


def test_ctw_examples():
    inst = inst_sets(cycle(4), [[2]] * 4)
    assert solve(inst, "ctw", arr=LinearArrangement((1, 2, 3, 4)), reps=10, seed=3).answer == "no"
    inst = inst_sets(cycle(4), [[1, 2]] * 4)
    res = solve(inst, "ctw", arr=LinearArrangement((1, 2, 3, 4)), reps=10, seed=3)
    assert res.answer == "yes" and res.stats["ctw"] == 2
    assert res.stats["max_index_family"] <= 2 * 4 * 3 ** 2
    inst = inst_sets(star(3), [[1, 2]] * 4)
    res = solve(inst, "ctw", arr=LinearArrangement((2, 1, 3, 4)), reps=10, seed=3)
    assert res.answer == "no"


def test_ctw_family_bound_on_random_arrangements():
    rng = random.Random(30)
    for _ in range(40):
        gen = random_arr(rng.randint(2, 12), rng.randint(1, 3), rng)
        inst = prepare(make_instance(gen.graph, rng, "mixed"))
        if inst is None:
            continue
        root = solve_ctw(inst, gen.arr, sample_isolation_weights(inst, 1), 0)
        assert root.stats["max_index_family"] <= 2 * inst.n * 3 ** gen.arr.cutwidth(gen.graph)


def test_pw_family_bound():
    rng = random.Random(31)
    for _ in range(40):
        gen = random_pkt(rng.randint(2, 10), rng.randint(1, 3), rng, "path")
        inst = prepare(make_instance(gen.graph, rng, "mixed"))
        if inst is None:
            continue
        r = inst.degrees.r
        root = solve_pw(inst, make_nice(gen.graph, gen.td), sample_isolation_weights(inst, 1), 0)
        assert root.stats["max_index_family"] <= (2 * r) ** (gen.td.width + 1)


def test_forget_fault_changes_answers():
    # K4 minus (3,4): degrees 2 and 1 at vertices 3, 4 force d(1) + d(2) = 3, which {1,3} forbids
    G = graph(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
    bad = inst_sets(G, [[1, 3], [1, 3], [2], [1]])
    td = _path_td(G)
    assert solve(bad, "pw", td=td, reps=20, seed=0).answer == "no"
    FAULTS.add("forget")
    try:
        assert solve(bad, "pw", td=td, reps=20, seed=0).answer == "yes"
        assert solve(bad, "tw", td=td, reps=20, seed=0).answer == "yes"
    finally:
        FAULTS.discard("forget")
