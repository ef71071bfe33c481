"""One entry point over all engines."""

from __future__ import annotations

from typing import Optional

from .core import Instance, SolveResult, validate_instance
from .cutcount import amplified_solve, min_cost
from .decomp import (LinearArrangement, NlcExpression, TreeDecomposition, make_nice,
                     validate_tree_decomposition)
from .engine_pw import solve_ctw, solve_pw
from .engine_tw import solve_tw
from .nlc import NlcInputError, solve_nlc
from .oracle import OracleCapExceeded, solve_bruteforce

ENGINES = ("oracle", "tw", "pw", "ctw", "nlc")
WITNESS_FLAG = {"tw": "decomp", "pw": "decomp", "ctw": "arrangement", "nlc": "nlc"}


class UsageError(ValueError):
    """Bad input or a missing/unsuitable witness; maps to exit code 1."""


def _check_instance(inst: Instance):
    bad = [c for c in validate_instance(inst) if c != "disconnected"]
    if bad:
        raise UsageError("invalid instance: " + ", ".join(bad))


def make_runner(engine: str, inst: Instance, td: TreeDecomposition = None, arr: LinearArrangement = None,
                join: str = "auto"):
    G = inst.graph
    if engine in ("tw", "pw"):
        if td is None:
            raise UsageError(f"engine {engine} needs a tree decomposition (--decomp)")
        chk = validate_tree_decomposition(G, td)
        if not chk.ok:
            raise UsageError("invalid decomposition: " + "; ".join(chk.violations))
        if engine == "pw" and not td.is_path():
            raise UsageError("engine pw needs a path decomposition")
        nice = make_nice(G, td)
        if engine == "tw":
            return lambda p, iso, cap: solve_tw(p, nice, iso, cap, join=join)
        return lambda p, iso, cap: solve_pw(p, nice, iso, cap)
    if engine == "ctw":
        if arr is None:
            raise UsageError("engine ctw needs a linear arrangement (--arrangement)")
        problems = arr.check(G)
        if problems:
            raise UsageError("invalid arrangement: " + "; ".join(problems))
        return lambda p, iso, cap: solve_ctw(p, arr, iso, cap)
    raise UsageError(f"engine {engine} is not a Cut&Count engine")


def solve(inst: Instance, engine: str, td: TreeDecomposition = None, arr: LinearArrangement = None,
          expr: NlcExpression = None, reps: int = 20, seed: Optional[int] = None, join: str = "auto",
          want_min_cost: bool = False, oracle_cap: int = 10) -> SolveResult:
    if engine not in ENGINES:
        raise UsageError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
    if reps < 1:
        raise UsageError("--reps must be at least 1")
    _check_instance(inst)
    if engine == "oracle":
        try:
            return solve_bruteforce(inst, cap=oracle_cap)
        except OracleCapExceeded as exc:
            raise UsageError(str(exc)) from exc
    if engine == "nlc":
        if inst.weighted:
            raise UsageError("nlc is unweighted-only")
        if expr is None:
            raise UsageError("engine nlc needs an expression (--nlc)")
        try:
            return solve_nlc(inst, expr)
        except NlcInputError as exc:
            raise UsageError(str(exc)) from exc
    runner = make_runner(engine, inst, td, arr, join)
    res = amplified_solve(inst, runner, reps=reps, seed=seed, engine=engine)
    if want_min_cost and inst.weighted:
        res.min_cost = min_cost(inst, runner, reps=reps, seed=res.seed)
    return res
