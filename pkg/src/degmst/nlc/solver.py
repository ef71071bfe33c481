"""Deterministic pattern DP over an NLC expression (unweighted instances)."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

from ..core import EarlyReject, Instance, SolveResult, screen
from ..decomp import NlcExpression, NlcJoin, NlcLeaf, check_nlc_matches
from .join import join_naive, join_structured
from .patterns import is_nice, is_zero, make_pattern, relabel, unit
from .reduce import ReduceStats, reduce_to_nice


class NlcInputError(ValueError):
    pass


@dataclass
class NlcRun:
    tables: dict = field(default_factory=dict)
    max_records: int = 0
    max_stage2: int = 0
    max_stage3: int = 0
    reductions: int = 0


@lru_cache(maxsize=200_000)
def _reduce_cached(A: tuple):
    st = ReduceStats()
    return frozenset(reduce_to_nice(A, st)), st.stage2_rounds, st.stage3_rounds


@lru_cache(maxsize=400_000)
def _relabel_reduce(P: tuple, beta: tuple):
    return _reduce_cached(relabel(beta, P))


def is_dead(A: tuple) -> bool:
    """A finished component next to unfinished ones can never become one tree."""
    return len(A) > 1 and any(is_zero(v) for v in A)


def leaf_table(k: int, label: int, allowed) -> set:
    return {make_pattern([tuple(t * x for x in unit(k, label))]) for t in sorted(allowed)}


def nlc_join(T1, T2, alpha, beta, run: NlcRun = None, naive: bool = False, prune_dead: bool = True) -> set:
    alpha = frozenset(alpha)
    out = set()
    for A1 in sorted(T1):
        for A2 in sorted(T2):
            cand = join_naive(A1, A2, alpha) if naive else join_structured(A1, A2, alpha, prune_dead)
            for P in cand:
                reduced, r2, r3 = _relabel_reduce(P, beta)
                if run is not None:
                    run.reductions += 1
                    run.max_stage2 = max(run.max_stage2, r2)
                    run.max_stage3 = max(run.max_stage3, r3)
                out |= reduced
    if prune_dead:
        out = {A for A in out if not is_dead(A)}
    return out


def run_nlc(inst: Instance, expr: NlcExpression, naive: bool = False, prune_dead: bool = True,
            keep_tables: bool = False) -> NlcRun:
    k = expr.k
    run = NlcRun()
    vert = {}
    for x in expr.postorder():
        nd = expr.nodes[x]
        if isinstance(nd, NlcLeaf):
            T = leaf_table(k, nd.label, inst.allowed(nd.vertex))
        else:
            T = nlc_join(vert.pop(nd.left), vert.pop(nd.right), nd.alpha, nd.beta, run, naive, prune_dead)
        for A in T:
            if not is_nice(A):
                raise AssertionError(f"record {A} at node {x} is not nice")
        run.max_records = max(run.max_records, len(T))
        vert[x] = T
        if keep_tables:
            run.tables[x] = set(T)
    run.tables[expr.root] = vert[expr.root]
    return run


def solve_nlc(inst: Instance, expr: NlcExpression, naive: bool = False, prune_dead: bool = True) -> SolveResult:
    t0 = time.perf_counter()
    if inst.weighted:
        raise NlcInputError("nlc is unweighted-only")
    problems = check_nlc_matches(expr, inst.graph)
    if problems:
        raise NlcInputError("; ".join(problems))
    res = SolveResult("no", "nlc")
    prepared = screen(inst)
    if isinstance(prepared, EarlyReject):
        res.stats["screen"] = prepared.reason
    else:
        run = run_nlc(prepared, expr, naive, prune_dead)
        zero = make_pattern([(0,) * expr.k])
        if zero in run.tables[expr.root]:
            res.answer = "yes"
        res.stats.update(max_index_family=run.max_records, max_stage2=run.max_stage2,
                         max_stage3=run.max_stage3, reductions=run.reductions)
    res.stats["ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return res
