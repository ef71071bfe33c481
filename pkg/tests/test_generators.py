import random

import pytest

from degmst.core import validate_instance
from degmst.decomp import check_nlc_matches, validate_tree_decomposition
from degmst.generators import (FAMILIES, POLICIES, connected_graphs, generate, grid_graph, make_instance,
                               nlc_expression_for, random_arr, random_nlc, random_pkt, random_tree_degrees,
                               star_graph)
from degmst.oracle import solve_bruteforce


@pytest.mark.parametrize("family", FAMILIES)
def test_generated_witnesses_are_valid(family):
    rng = random.Random(family)
    for _ in range(10):
        gen = generate(family, rng, n=rng.randint(2, 14), k=rng.randint(1, 3), leaves=rng.randint(2, 9))
        G = gen.graph
        assert G.is_connected()
        if gen.td is not None:
            assert validate_tree_decomposition(G, gen.td).ok
        if gen.arr is not None:
            assert gen.arr.check(G) == []
        if gen.expr is not None:
            assert check_nlc_matches(gen.expr, G) == []


def test_random_pkt_width_bound():
    rng = random.Random(1)
    for k in (1, 2, 3):
        for shape in ("tree", "path"):
            gen = random_pkt(20, k, rng, shape)
            assert gen.td.width <= k and gen.graph.n == 20
            assert shape == "tree" or gen.td.is_path()


def test_random_arr_cut_bound():
    rng = random.Random(2)
    for c in (1, 2, 4):
        gen = random_arr(15, c, rng)
        assert gen.arr.cutwidth(gen.graph) <= c


def test_random_nlc_label_count():
    gen = random_nlc(2, 6, random.Random(3))
    assert gen.expr.k == 2 and gen.graph.n == 6


def test_determinism():
    a = generate("random-pkt", random.Random(5), n=9, k=2)
    b = generate("random-pkt", random.Random(5), n=9, k=2)
    assert a.graph == b.graph and a.td == b.td


def test_grid_and_star():
    g = grid_graph(2, 3)
    assert (g.graph.n, g.graph.m) == (6, 7) and g.td.width == 3
    s = star_graph(4)
    assert s.graph.m == 4 and check_nlc_matches(s.expr, s.graph) == []


def test_connected_graph_counts():
    assert [sum(1 for G in connected_graphs(n) if G.n == n) for n in range(1, 7)] == [1, 1, 2, 6, 21, 112]


def test_nlc_expression_for_small_graphs():
    for G in connected_graphs(5):
        widths = [k for k in (1, 2, 3) if nlc_expression_for(G, k) is not None]
        assert widths, G.edges
        for k in widths:
            assert check_nlc_matches(nlc_expression_for(G, k), G) == []


def test_tree_specified_policy_is_yes():
    rng = random.Random(8)
    for G in connected_graphs(6):
        if G.n >= 2:
            inst = make_instance(G, rng, "tree-specified")
            assert solve_bruteforce(inst).answer == "yes"


@pytest.mark.parametrize("policy", POLICIES)
def test_policies_validate(policy):
    rng = random.Random(policy)
    for _ in range(20):
        gen = generate("random-pkt", rng, n=rng.randint(2, 10), k=2)
        inst = make_instance(gen.graph, rng, policy, max_weight=3)
        assert validate_instance(inst) == []


def test_random_tree_degrees_sum():
    rng = random.Random(9)
    for G in connected_graphs(6):
        if G.n >= 2:
            assert sum(random_tree_degrees(G, rng)) == 2 * G.n - 2
