import pytest

from degmst.core import (DegreeSpec, EarlyReject, Instance, VariantError, bounded_to_set, clamp_degrees,
                         max_requirement, screen, specified_to_bounded, validate_instance)
from degmst.oracle import solve_bruteforce

from conftest import complete, cycle, graph, inst_bounded, inst_sets, inst_specified, path


def test_validate_clean_k3():
    assert validate_instance(inst_sets(complete(3), [[1, 2]] * 3)) == []


def test_validate_self_loop():
    G = graph(2, [(1, 2), (1, 1)])
    assert validate_instance(inst_sets(G, [[1], [1]])) == ["self-loop"]


def test_validate_disconnected():
    assert validate_instance(inst_sets(graph(2, []), [[1], [1]])) == ["disconnected"]


@pytest.mark.parametrize("G,sets,weights,bound,codes", [
    (graph(2, [(1, 2), (2, 1)]), [[1], [1]], None, None, ["duplicate-edge"]),
    (graph(2, [(1, 3)]), [[1], [1]], None, None, ["endpoint-out-of-range"]),
    (path(2), [[1]], None, None, ["degree-missing"]),
    (path(2), [[0], [1]], None, None, ["degree-nonpositive"]),
    (path(2), [[1], [1]], (1,), None, ["weights-bound-mismatch"]),
    (path(2), [[1], [1]], (-1,), 3, ["negative-weight"]),
])
def test_validate_codes(G, sets, weights, bound, codes):
    assert validate_instance(Instance(G, DegreeSpec.from_sets(sets), weights, bound)) == codes


def test_specified_to_bounded_rejects_bad_sum():
    assert isinstance(specified_to_bounded(inst_specified(cycle(4), [2] * 4)), EarlyReject)


@pytest.mark.parametrize("G,degs", [(path(3), [1, 2, 1]), (complete(3), [2, 1, 1])])
def test_specified_to_bounded_keeps_graph(G, degs):
    out = specified_to_bounded(inst_specified(G, degs))
    assert out.variant == "bounded" and out.graph == G and out.degrees.values == tuple((d,) for d in degs)


def test_specified_to_bounded_wrong_variant():
    with pytest.raises(VariantError):
        specified_to_bounded(inst_bounded(path(3), [2, 2, 2]))


def test_bounded_to_set():
    out = bounded_to_set(inst_bounded(path(3), [2, 1, 2]))
    assert out.variant == "set"
    assert [sorted(out.allowed(v)) for v in (1, 2, 3)] == [[1, 2], [1], [1, 2]]


def test_bounded_all_one_k4_is_no():
    s = bounded_to_set(inst_bounded(complete(4), [1] * 4))
    assert isinstance(screen(s), EarlyReject)
    assert solve_bruteforce(s).answer == "no"


@pytest.mark.parametrize("spec,r", [
    (DegreeSpec.from_sets([[1, 3], [2]]), 3),
    (DegreeSpec.from_sets([[1], [1], [1]]), 1),
])
def test_max_requirement(spec, r):
    assert max_requirement(Instance(path(len(spec.values)), spec)) == r


def test_max_requirement_after_bounded_to_set():
    inst = inst_bounded(path(3), [2, 4, 3])
    assert max_requirement(bounded_to_set(inst)) == 4 == max_requirement(inst)


def test_clamp_drops_unreachable_degrees(caplog):
    inst = inst_sets(path(3), [[1, 5], [2, 7], [1]])
    with caplog.at_level("WARNING", logger="degmst.core"):
        out = clamp_degrees(inst)
    assert [sorted(out.allowed(v)) for v in (1, 2, 3)] == [[1], [2], [1]]
    assert "clamping" in caplog.text


def test_bounded_clamped_to_n_minus_1():
    out = clamp_degrees(inst_bounded(path(3), [9, 9, 9]))
    assert out.degrees.values == ((2,), (2,), (2,))


@pytest.mark.parametrize("inst,reason", [
    (inst_sets(graph(3, [(1, 2)]), [[1]] * 3), "disconnected"),
    (inst_sets(graph(1, []), [[1]]), "single vertex has tree degree 0"),
    (inst_sets(path(3), [[1], [1], [1]]), "maximum degree sum below 2n-2"),
    (inst_sets(path(3), [[2], [2], [2]]), "minimum degree sum above 2n-2"),
])
def test_screen_rejections(inst, reason):
    out = screen(inst)
    assert isinstance(out, EarlyReject) and out.reason == reason


def test_screen_empty_set_after_clamp():
    out = screen(inst_sets(path(2), [[5], [1]]))
    assert isinstance(out, EarlyReject) and out.reason == "empty degree set"


def test_reductions_preserve_oracle_answers_exhaustively():
    from degmst.generators import connected_graphs, random_tree_degrees
    import random

    rng = random.Random(11)
    checked = 0
    for G in connected_graphs(6):
        if G.n < 2:
            continue
        degs = random_tree_degrees(G, rng)
        spec = inst_specified(G, degs)
        via_bounded = specified_to_bounded(spec)
        assert solve_bruteforce(spec).answer == "yes"
        assert solve_bruteforce(via_bounded).answer == solve_bruteforce(bounded_to_set(via_bounded)).answer
        b = inst_bounded(G, [max(1, d - rng.randint(0, 1)) for d in degs])
        assert solve_bruteforce(b).answer == solve_bruteforce(bounded_to_set(b)).answer
        assert max_requirement(b) == max_requirement(bounded_to_set(b))
        checked += 1
    assert checked == 142
