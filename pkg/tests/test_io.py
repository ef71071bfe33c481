import json
import random

import pytest

from degmst.core import SolveResult
from degmst.decomp import LinearArrangement, nlc_graph
from degmst.generators import generate, make_instance, random_nlc
from degmst.io import (FormatError, parse_arr, parse_instance, parse_nlc, parse_td, read_report, report_dict,
                       write_arr, write_instance, write_nlc, write_report, write_td)

K2 = "p dmst 2 1 set 0\ne 1 2\nd 1 1 1\nd 2 1 1\n"


def test_minimal_k2():
    inst = parse_instance(K2)
    assert inst.n == 2 and inst.m == 1 and inst.variant == "set" and not inst.weighted
    assert write_instance(inst) == K2


def test_comments_and_whitespace():
    text = "c hello\np  dmst 2 1 bounded 1\n\ne 1 2 5\nc mid\nd 1 1 1\nd 2 1 1\nb 7\n"
    inst = parse_instance(text)
    assert inst.weights == (5,) and inst.bound == 7 and inst.variant == "bounded"
    assert write_instance(inst) == "p dmst 2 1 bounded 1\ne 1 2 5\nd 1 1 1\nd 2 1 1\nb 7\n"


def _codes(text, parser=parse_instance):
    with pytest.raises(FormatError) as ei:
        parser(text)
    return ei.value.codes


@pytest.mark.parametrize("text,code", [
    ("e 1 2\n", "missing-header"),
    ("p dmst 2 1 set 0\np dmst 2 1 set 0\ne 1 2\nd 1 1 1\nd 2 1 1\n", "duplicate-header"),
    ("p dmst 2 1 weird 0\ne 1 2\nd 1 1 1\nd 2 1 1\n", "bad-variant"),
    ("p dmst 2 x set 0\n", "bad-integer"),
    ("p dmst 2 1 set 1\ne 1 2\nd 1 1 1\nd 2 1 1\nb 3\n", "weight-missing"),
    ("p dmst 2 1 set 0\ne 1 2 4\nd 1 1 1\nd 2 1 1\n", "weight-unexpected"),
    ("p dmst 2 1 set 0\ne 1 3\nd 1 1 1\nd 2 1 1\n", "vertex-range"),
    ("p dmst 2 1 set 1\ne 1 2 -1\nd 1 1 1\nd 2 1 1\nb 3\n", "negative-weight"),
    ("p dmst 2 1 set 0\ne 1 2\nd 1 2 1\nd 2 1 1\n", "degree-count"),
    ("p dmst 2 1 bounded 0\ne 1 2\nd 1 2 1 2\nd 2 1 1\n", "degree-arity"),
    ("p dmst 2 1 set 0\ne 1 2\nd 1 1 0\nd 2 1 1\n", "degree-nonpositive"),
    ("p dmst 2 1 set 0\ne 1 2\nd 1 1 1\nd 2 1 1\nb 3\n", "bound-unexpected"),
    ("p dmst 2 1 set 1\ne 1 2 1\nd 1 1 1\nd 2 1 1\nb 3\nb 4\n", "duplicate-bound"),
    ("p dmst 2 1 set 0\ne 1 2\nd 1 1 1\nd 2 1 1\nq 1\n", "unknown-line"),
    ("p dmst 2 2 set 0\ne 1 2\nd 1 1 1\nd 2 1 1\n", "edge-count"),
    ("p dmst 2 1 set 0\ne 1 2\nd 1 1 1\n", "degree-missing"),
    ("p dmst 2 1 set 1\ne 1 2 1\nd 1 1 1\nd 2 1 1\n", "bound-missing"),
])
def test_instance_error_codes(text, code):
    assert code in _codes(text)


def test_errors_are_collected_with_positions():
    with pytest.raises(FormatError) as ei:
        parse_instance("p dmst 3 2 set 0\ne 1 9\ne 1 2 3\nd 1 1 1\n")
    errs = ei.value.errors
    assert [(e.line, e.col, e.code) for e in errs] == [(2, 3, "vertex-range"), (3, 1, "weight-unexpected"),
                                                       (4, 1, "degree-missing")]
    assert str(ei.value).startswith("2:3: vertex-range")


def test_duplicate_degree_line_last_wins():
    warnings = []
    inst = parse_instance("p dmst 2 1 set 0\ne 1 2\nd 1 1 2\nd 1 1 1\nd 2 1 1\n", warnings)
    assert inst.degrees.values[0] == (1,)
    assert [w.code for w in warnings] == ["duplicate-degree"]


def test_instance_roundtrip_200():
    rng = random.Random(99)
    for i in range(200):
        fam = ("random-pkt", "random-arr", "random-nlc", "grid", "cycle")[i % 5]
        gen = generate(fam, rng, n=rng.randint(2, 12), k=rng.randint(1, 3), leaves=rng.randint(2, 9))
        mw = 0 if fam == "random-nlc" else rng.randint(0, 4)
        inst = make_instance(gen.graph, rng, "mixed", max_weight=mw)
        text = write_instance(inst)
        back = parse_instance(text)
        assert back == inst and write_instance(back) == text


P3_TD = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n"


def test_td_p3():
    tdf = parse_td(P3_TD)
    assert tdf.td.width == 1 and tdf.n == 3 and tdf.td.is_path()
    assert write_td(tdf.td, 3) == P3_TD


@pytest.mark.parametrize("text,code", [
    ("s td 3 2 3\nb 1 1 2\nb 2 2 3\n1 2\n", "bag-count"),
    ("s td 2 2 3\nb 1 1 2\nb 3 2 3\n1 3\n", "bag-ids"),
    ("s td 2 1 3\nb 1 1 2\nb 2 2 3\n1 2\n", "bag-size"),
    ("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2 3\n", "bad-tree-edge"),
    ("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 x\n", "bad-integer"),
    ("s td 2 2 3\nb 1 1 2\nb 1 2 3\n1 2\n", "duplicate-bag"),
    ("s td 2 2 3\nb 1 1 2\nb 2 2 5\n1 2\n", "vertex-range"),
])
def test_td_error_codes(text, code):
    assert code in _codes(text, parse_td)


def test_arr_roundtrip_and_errors():
    arr = parse_arr("s arr 4\n2 4 1 3\n")
    assert arr == LinearArrangement((2, 4, 1, 3)) and write_arr(arr) == "s arr 4\n2 4 1 3\n"
    assert "not-permutation" in _codes("s arr 3\n1 1 2\n", parse_arr)
    assert "extra-line" in _codes("s arr 2\n1 2\n2 1\n", parse_arr)
    assert "missing-permutation" in _codes("s arr 2\n", parse_arr)


NLC_K2 = "s nlc 2 3\nn 1 leaf 1 1\nn 2 leaf 2 2\nn 3 join 1 2 a{ 1,2 } b{ 1:1 2:1 }\nr 3\n"


def test_nlc_parse_and_roundtrip():
    expr = parse_nlc(NLC_K2)
    assert expr.k == 2 and expr.root == 3
    assert nlc_graph(expr).edges == ((1, 2),)
    assert parse_nlc(write_nlc(expr)) == expr


def test_nlc_leaf_vertex_optional():
    expr = parse_nlc("s nlc 1 3\nn 1 leaf 1\nn 2 leaf 1\nn 3 join 1 2 a{ } b{ 1:1 }\nr 3\n")
    assert sorted(expr.nodes[x].vertex for x in expr.leaves()) == [1, 2]


def test_nlc_random_roundtrip():
    rng = random.Random(4)
    for _ in range(50):
        gen = random_nlc(rng.randint(1, 3), rng.randint(1, 10), rng)
        text = write_nlc(gen.expr)
        assert write_nlc(parse_nlc(text)) == text
        assert nlc_graph(parse_nlc(text)) == gen.graph


@pytest.mark.parametrize("text,code", [
    ("s nlc 2 1\nn 1 leaf 3 1\nr 1\n", "label-range"),
    ("s nlc 2 3\nn 1 leaf 1 1\nn 2 leaf 1 2\nn 3 join 1 2 a{ 1,3 } b{ 1:1 2:2 }\nr 3\n", "alpha-range"),
    ("s nlc 2 3\nn 1 leaf 1 1\nn 2 leaf 1 2\nn 3 join 1 2 a{ 1,1 } b{ 1:1 }\nr 3\n", "beta-not-total"),
    ("s nlc 2 2\nn 1 leaf 1 1\nr 1\n", "node-count"),
    ("s nlc 2 1\nn 1 leaf 1 1\n", "missing-root"),
    ("s nlc 2 3\nn 1 leaf 1 1\nn 2 leaf 1 2\nn 3 join 1 9 a{ } b{ 1:1 2:2 }\nr 3\n", "unknown-child"),
    ("s nlc 2 3\nn 1 leaf 1 1\nn 2 leaf 1\nn 3 join 1 2 a{ } b{ 1:1 2:2 }\nr 3\n", "mixed-leaves"),
    ("s nlc 2 2\nn 1 leaf 1 1\nn 1 leaf 1 2\nr 1\n", "duplicate-node"),
])
def test_nlc_error_codes(text, code):
    assert code in _codes(text, parse_nlc)


def test_report_schema():
    res = SolveResult("yes", "tw", min_cost=3, reps=2, seed=5, witness=(3, 11),
                      stats={"max_index_family": 36, "table_cells": 100, "ms": 1.5, "extra": 1})
    d = report_dict(res, {"instance": "a.dmst"})
    assert d["answer"] == "yes" and d["min_cost"] == 3 and d["witness"] == {"omega1": 3, "omega2": 11}
    assert d["stats"] == {"max_index_family": 36, "table_cells": 100, "ms": 1.5}
    assert d["files"] == {"instance": "a.dmst"}
    assert read_report(write_report(res, {"instance": "a.dmst"})) == json.loads(json.dumps(d))
    d = report_dict(SolveResult("no", "oracle"))
    assert d["witness"] is None and d["min_cost"] is None
