"""Differential testing of every engine against the brute-force oracle.

Randomized engines are judged one-sidedly: a yes the oracle refutes is a
hard failure, a missed yes is a false negative charged to the 2^-reps
budget. Deterministic engines must agree exactly.
"""

from __future__ import annotations

import contextlib
import logging
import random
import time
from dataclasses import dataclass, field, replace
from typing import Optional

from .core import Graph, Instance, screen, EarlyReject
from .cutcount import FAULTS, InvariantViolation
from .decomp import LinearArrangement, NlcExpression, TreeDecomposition, arrangement_bags, path_decomposition
from .generators import (Generated, connected_graphs, make_instance, nlc_expression_for, random_arr,
                         random_nlc, random_pkt)
from .io import write_arr, write_instance, write_nlc, write_td
from .oracle import solve_bruteforce
from .solver import solve

log = logging.getLogger(__name__)

RANDOMIZED = ("tw", "pw", "ctw")
ALL_ENGINES = ("tw", "pw", "ctw", "nlc")


@dataclass
class Case:
    cid: str
    inst: Instance
    td: Optional[TreeDecomposition] = None
    path_td: Optional[TreeDecomposition] = None
    arr: Optional[LinearArrangement] = None
    expr: Optional[NlcExpression] = None


@dataclass
class Failure:
    cid: str
    engine: str
    kind: str            # false-positive | mismatch | invariant | false-negative
    seed: Optional[int]
    detail: str
    instance: str        # .dmst text of the (shrunk) instance
    witness: str = ""

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class Summary:
    cases: int = 0
    runs: int = 0
    hard: list = field(default_factory=list)
    false_negatives: list = field(default_factory=list)
    family_records: list = field(default_factory=list)   # (engine, max|I|, bound, cid)
    skipped: int = 0
    seconds: float = 0.0
    fn_budget: int = 1

    @property
    def ok(self) -> bool:
        return not self.hard and len(self.false_negatives) <= self.fn_budget

    def as_dict(self) -> dict:
        return {
            "cases": self.cases, "runs": self.runs, "skipped": self.skipped,
            "hard_fails": [f.as_dict() for f in self.hard],
            "false_negatives": [f.as_dict() for f in self.false_negatives],
            "fn_budget": self.fn_budget,
            "bound_violations": sum(1 for _, fam, b, _ in self.family_records if fam > b),
            "seconds": round(self.seconds, 3), "ok": self.ok,
        }


def bfs_order(G: Graph, start: int = 1) -> LinearArrangement:
    seen, order = {start}, [start]
    for x in order:
        for y in sorted(G.adjacency[x]):
            if y not in seen:
                seen.add(y)
                order.append(y)
    order += [v for v in G.vertices if v not in seen]
    return LinearArrangement(tuple(order))


def heuristic_arrangement(G: Graph) -> LinearArrangement:
    """Best BFS order over all start vertices, by cutwidth."""
    return min((bfs_order(G, s) for s in G.vertices), key=lambda a: (a.cutwidth(G), a.order))


def heuristic_td(G: Graph) -> TreeDecomposition:
    import networkx as nx
    from networkx.algorithms.approximation import treewidth_min_fill_in

    H = nx.Graph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from(G.edges)
    _, T = treewidth_min_fill_in(H)
    ids = {b: i for i, b in enumerate(sorted(T.nodes, key=sorted), 1)}
    return TreeDecomposition({i: b for b, i in ids.items()}, tuple(sorted((ids[a], ids[b]) for a, b in T.edges)))


def complete_witnesses(cid: str, inst: Instance, gen: Generated = None, nlc_k_max: int = 4,
                       want_nlc: bool = True) -> Case:
    G = inst.graph
    gen = gen or Generated("given", G)
    arr = gen.arr or heuristic_arrangement(G)
    path_td = gen.td if gen.td is not None and gen.td.is_path() else path_decomposition(arrangement_bags(G, arr))
    td = gen.td or heuristic_td(G)
    expr = gen.expr
    if expr is None and want_nlc and not inst.weighted and G.n <= 8:
        for k in range(1, nlc_k_max + 1):
            expr = nlc_expression_for(G, k)
            if expr is not None:
                break
    return Case(cid, inst, td, path_td, arr, expr)


def exhaustive_cases(max_n: int, seed: int) -> list:
    rng = random.Random(f"exhaustive:{seed}")
    out = []
    for gi, G in enumerate(connected_graphs(max_n)):
        for policy in ("set", "bounded", "specified", "tree-specified"):
            inst = make_instance(G, rng, policy)
            out.append(complete_witnesses(f"x{gi}-{policy}", inst))
    return out


CASE_FAMILIES = ("random-pkt", "random-pkt-path", "random-arr", "random-nlc")


def random_cases(count: int, n_max: int, seed: int, max_weight: int = 3, weighted_frac: float = 0.5,
                 policy: str = "mixed", want_nlc: bool = True, families=CASE_FAMILIES) -> list:
    out = []
    for i in range(count):
        rng = random.Random(f"case:{seed}:{i}")
        n = rng.randint(2, n_max)
        fam = families[i % len(families)]
        k = rng.randint(1, 3)
        if fam == "random-pkt":
            gen = random_pkt(n, k, rng, "tree")
        elif fam == "random-pkt-path":
            gen = random_pkt(n, k, rng, "path")
        elif fam == "random-arr":
            gen = random_arr(n, k, rng)
        else:
            gen = random_nlc(k, n, rng)
        weighted = rng.random() < weighted_frac
        inst = make_instance(gen.graph, rng, policy)
        if weighted:
            W = tuple(rng.randint(0, max_weight) for _ in gen.graph.edges)
            top = (n - 1) * max_weight
            bound = top if rng.random() < 0.3 else rng.randint(0, top)
            inst = replace(inst, weights=W, bound=bound)
        out.append(complete_witnesses(f"r{i}-{fam}", inst, gen, want_nlc=want_nlc))
    return out


@contextlib.contextmanager
def inject_fault(name: Optional[str]):
    if not name:
        yield
        return
    FAULTS.add(name)
    try:
        yield
    finally:
        FAULTS.discard(name)


def _witness_text(case: Case, engine: str) -> str:
    if engine == "tw":
        return write_td(case.td, case.inst.n)
    if engine == "pw":
        return write_td(case.path_td, case.inst.n)
    if engine == "ctw":
        return write_arr(case.arr)
    if engine == "nlc" and case.expr is not None:
        return write_nlc(case.expr)
    return ""


def _judge(case: Case, engine: str, reps: int, seed: int, truth: str):
    """(kind or None, result or None, detail)."""
    try:
        res = solve(case.inst, engine, td=case.path_td if engine == "pw" else case.td, arr=case.arr,
                    expr=case.expr, reps=reps, seed=seed)
    except InvariantViolation as exc:
        return "invariant", None, str(exc)
    got = res.answer
    if got == truth:
        return None, res, ""
    if engine in RANDOMIZED:
        return ("false-positive" if got == "yes" else "false-negative"), res, f"engine {got}, oracle {truth}"
    return "mismatch", res, f"engine {got}, oracle {truth}"


def witness_width(case: Case, engine: str) -> int:
    if engine == "tw":
        return case.td.width
    if engine == "pw":
        return case.path_td.width
    if engine == "ctw":
        return case.arr.cutwidth(case.inst.graph)
    return case.expr.k if case.expr is not None else 0


def applicable(case: Case, engine: str, max_width: dict = None) -> bool:
    if engine == "nlc":
        if case.inst.weighted or case.expr is None:
            return False
    lim = (max_width or {}).get(engine)
    return lim is None or witness_width(case, engine) <= lim


def _shrink(case: Case, engine: str, reps: int, seed: int, kind: str) -> Case:
    """Drop edges (keeping the graph connected) while the failure persists."""
    if engine == "nlc":
        return case
    cur = case
    changed = True
    while changed:
        changed = False
        for i in range(cur.inst.m):
            edges = cur.inst.graph.edges[:i] + cur.inst.graph.edges[i + 1:]
            G = Graph(cur.inst.n, edges)
            if not G.is_connected():
                continue
            W = None if cur.inst.weights is None else cur.inst.weights[:i] + cur.inst.weights[i + 1:]
            inst = replace(cur.inst, graph=G, weights=W)
            cand = replace(cur, inst=inst)
            truth = solve_bruteforce(inst).answer
            k, _, _ = _judge(cand, engine, reps, seed, truth)
            if k == kind:
                cur, changed = cand, True
                break
    return cur


DEFAULT_MAX_WIDTH = {"tw": 4, "pw": 4, "ctw": 5}


def run_difftest(cases: list, engines=ALL_ENGINES, reps: int = 20, seed: int = 0, fault: str = None,
                 fn_budget: int = 1, shrink: bool = True, max_width: dict = None, progress=None) -> Summary:
    """Engines whose witness is wider than ``max_width[engine]`` are skipped (and counted)."""
    if max_width is None:
        max_width = DEFAULT_MAX_WIDTH
    t0 = time.perf_counter()
    summ = Summary(fn_budget=fn_budget)
    with inject_fault(fault):
        for case in cases:
            summ.cases += 1
            truth = solve_bruteforce(case.inst).answer
            prepared = screen(case.inst)
            r = 0 if isinstance(prepared, EarlyReject) else prepared.degrees.r
            for engine in engines:
                if not applicable(case, engine, max_width):
                    summ.skipped += 1
                    continue
                es = random.Random(f"{seed}:{case.cid}:{engine}").getrandbits(63)
                kind, res, detail = _judge(case, engine, reps, es, truth)
                summ.runs += 1
                if res is not None and engine in ("pw", "ctw") and "max_index_family" in res.stats:
                    if engine == "pw":
                        bound = (2 * r) ** (case.path_td.width + 1)
                    else:
                        bound = 2 * case.inst.n * 3 ** res.stats.get("ctw", case.arr.cutwidth(case.inst.graph))
                    summ.family_records.append((engine, res.stats["max_index_family"], bound, case.cid))
                if kind is None:
                    continue
                small = _shrink(case, engine, reps, es, kind) if shrink and kind != "false-negative" else case
                fail = Failure(case.cid, engine, kind, es, detail, write_instance(small.inst),
                               _witness_text(small, engine))
                (summ.false_negatives if kind == "false-negative" else summ.hard).append(fail)
                log.info("%s %s on %s: %s", kind, engine, case.cid, detail)
            if progress:
                progress(summ)
    summ.seconds = time.perf_counter() - t0
    return summ
