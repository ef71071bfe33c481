"""Command-line front end.

Exit codes: 0 ran (the answer is in the report), 1 usage or parse error,
2 internal invariant violation (or, for difftest, a failed suite).
JSON goes to stdout, human-readable text to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import random
import sys
import time

from . import __version__
from .core import validate_instance
from .cutcount import InvariantViolation, TableBudgetExceeded
from .decomp import (DecompositionError, NlcError, arrangement_bags, check_nlc_matches, make_nice,
                     path_decomposition, validate_nice, validate_tree_decomposition)
from .difftest import (ALL_ENGINES, complete_witnesses, exhaustive_cases, random_cases, run_difftest,
                       witness_width)
from .generators import FAMILIES, POLICIES, generate, make_instance
from .io import (FormatError, parse_arr, parse_instance, parse_nlc, parse_td, read_file, report_dict, write_arr,
                 write_file, write_instance, write_nlc, write_td)
from .oracle import DEFAULT_CAP
from .solver import ENGINES, UsageError, solve

log = logging.getLogger("degmst")

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _seed(value):
    return value if value is not None else time.time_ns() % (2 ** 63)


# --------------------------------------------------------------------------


def cmd_solve(a) -> int:
    inst = parse_instance(read_file(a.instance))
    files = {"instance": a.instance}
    td = arr = expr = None
    if a.decomp:
        td = parse_td(read_file(a.decomp)).td
        files["decomp"] = a.decomp
    if a.arrangement:
        arr = parse_arr(read_file(a.arrangement))
        files["arrangement"] = a.arrangement
    if a.nlc:
        expr = parse_nlc(read_file(a.nlc))
        files["nlc"] = a.nlc
    seed = _seed(a.seed)
    res = solve(inst, a.engine, td=td, arr=arr, expr=expr, reps=a.reps, seed=seed, join=a.join,
                want_min_cost=a.min_cost, oracle_cap=a.oracle_cap)
    if a.engine in ("tw", "pw", "ctw"):
        res.seed = seed
    _emit(report_dict(res, files))
    print(f"{a.engine}: {res.answer}", file=sys.stderr)
    return EXIT_OK


def cmd_validate(a) -> int:
    inst = parse_instance(read_file(a.instance))
    out = {"instance": validate_instance(inst)}
    G = inst.graph
    if a.decomp:
        tdf = parse_td(read_file(a.decomp))
        chk = validate_tree_decomposition(G, tdf.td)
        nice = []
        if chk.ok:
            nice = validate_nice(G, make_nice(G, tdf.td))
        out["decomp"] = {"violations": chk.violations, "width": chk.width, "path": tdf.td.is_path(),
                         "nice_violations": nice}
    if a.arrangement:
        arr = parse_arr(read_file(a.arrangement))
        problems = arr.check(G)
        out["arrangement"] = {"violations": problems, "cutwidth": None if problems else arr.cutwidth(G)}
    if a.nlc:
        expr = parse_nlc(read_file(a.nlc))
        out["nlc"] = {"violations": check_nlc_matches(expr, G), "k": expr.k}
    ok = not out["instance"] and all(not v.get("violations") and not v.get("nice_violations")
                                     for k, v in out.items() if k != "instance")
    out["ok"] = ok
    _emit(out)
    if not ok:
        print("validation failed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_USAGE


_KIND = {".dmst": "dmst", ".td": "td", ".arr": "arr", ".nlc": "nlc"}


def cmd_convert(a) -> int:
    src_kind = _KIND.get(os.path.splitext(a.input)[1])
    dst_kind = _KIND.get(os.path.splitext(a.output)[1])
    if src_kind is None or dst_kind is None:
        raise UsageError("file extensions must be one of .dmst .td .arr .nlc")
    text = read_file(a.input)
    if src_kind == dst_kind:
        out = {"dmst": lambda t: write_instance(parse_instance(t)),
               "td": lambda t: write_td(*parse_td(t)),
               "arr": lambda t: write_arr(parse_arr(t)),
               "nlc": lambda t: write_nlc(parse_nlc(t))}[src_kind](text)
    elif (src_kind, dst_kind) == ("arr", "td"):
        if not a.instance:
            raise UsageError("converting an arrangement to a decomposition needs --instance")
        inst = parse_instance(read_file(a.instance))
        arr = parse_arr(text)
        if arr.check(inst.graph):
            raise UsageError("; ".join(arr.check(inst.graph)))
        out = write_td(path_decomposition(arrangement_bags(inst.graph, arr)), inst.n)
    else:
        raise UsageError(f"no conversion from .{src_kind} to .{dst_kind}")
    write_file(a.output, out)
    _emit({"input": a.input, "output": a.output})
    return EXIT_OK


def cmd_gen(a) -> int:
    if a.leaves is not None and a.family != "random-nlc":
        raise UsageError("--leaves only applies to random-nlc")
    if a.shape != "tree" and a.family != "random-pkt":
        raise UsageError("--shape only applies to random-pkt")
    if a.family == "random-nlc" and (a.max_weight or a.bound is not None):
        raise UsageError("random-nlc instances are for the unweighted nlc engine; drop --max-weight/--bound")
    if a.bound is not None and not a.max_weight:
        raise UsageError("--bound needs --max-weight")
    seed = _seed(a.seed)
    rng = random.Random(seed)
    gen = generate(a.family, rng, n=a.n, k=a.k, leaves=a.leaves, shape=a.shape)
    inst = make_instance(gen.graph, rng, a.policy, a.max_weight, a.bound, a.rmax)
    files = {"instance": a.out + ".dmst"}
    write_file(files["instance"], write_instance(inst))
    if gen.td is not None:
        files["decomp"] = a.out + ".td"
        write_file(files["decomp"], write_td(gen.td, gen.graph.n))
    if gen.arr is not None:
        files["arrangement"] = a.out + ".arr"
        write_file(files["arrangement"], write_arr(gen.arr))
    if gen.expr is not None:
        files["nlc"] = a.out + ".nlc"
        write_file(files["nlc"], write_nlc(gen.expr))
    info = {"family": a.family, "seed": seed, "n": gen.graph.n, "m": gen.graph.m, "files": files}
    if gen.td is not None:
        info["width"] = gen.td.width
    if gen.arr is not None:
        info["cutwidth"] = gen.arr.cutwidth(gen.graph)
    if gen.expr is not None:
        info["k"] = gen.expr.k
    _emit(info)
    return EXIT_OK


def _engine_list(text):
    engines = tuple(e.strip() for e in text.split(",") if e.strip())
    bad = [e for e in engines if e not in ALL_ENGINES]
    if bad:
        raise UsageError(f"unknown difftest engines {bad}; choose from {', '.join(ALL_ENGINES)}")
    return engines


def cmd_difftest(a) -> int:
    if a.n_max > DEFAULT_CAP:
        raise UsageError(f"--n-max must be at most the oracle cap {DEFAULT_CAP}")
    engines = _engine_list(a.engines)
    seed = _seed(a.seed)
    if not a.verbose:
        logging.getLogger("degmst.core").setLevel(logging.ERROR)
    cases = exhaustive_cases(a.exhaustive_n, seed) if a.exhaustive_n else []
    cases += random_cases(a.count, a.n_max, seed, max_weight=a.max_weight, weighted_frac=a.weighted_frac,
                          want_nlc="nlc" in engines)
    summ = run_difftest(cases, engines, reps=a.reps, seed=seed, fault=a.fault, fn_budget=a.fn_budget)
    out = summ.as_dict()
    out.update(seed=seed, reps=a.reps, engines=list(engines))
    _emit(out)
    print(f"difftest: {summ.cases} cases, {summ.runs} runs, {len(summ.hard)} hard fails, "
          f"{len(summ.false_negatives)} false negatives, {summ.skipped} skipped", file=sys.stderr)
    for f in summ.hard[:3]:
        print(f"hard fail {f.kind} [{f.engine}] case {f.cid} seed {f.seed}:\n{f.instance}", file=sys.stderr)
    return EXIT_OK if summ.ok else EXIT_INTERNAL


BENCH_FIELDS = ("instance", "engine", "width", "r", "max_index_family", "cells", "ms", "answer")


def cmd_bench(a) -> int:
    engines = [e for e in a.engines.split(",") if e]
    for e in engines:
        if e not in ("tw", "pw", "ctw"):
            raise UsageError("bench runs the Cut&Count engines tw, pw, ctw")
    seed = _seed(a.seed)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(BENCH_FIELDS)
    for k in [int(x) for x in a.widths.split(",")]:
        for i in range(a.count):
            rng = random.Random(f"bench:{seed}:{k}:{i}")
            fam = "random-arr" if engines == ["ctw"] else "random-pkt"
            gen = generate(fam, rng, n=a.n, k=k, shape="path")
            inst = make_instance(gen.graph, rng, a.policy, rmax=a.rmax)
            case = complete_witnesses(f"{fam}-k{k}-{i}", inst, gen, want_nlc=False)
            for e in engines:
                t0 = time.perf_counter()
                res = solve(inst, e, td=case.path_td if e == "pw" else case.td, arr=case.arr,
                            reps=a.reps, seed=seed)
                ms = (time.perf_counter() - t0) * 1000
                w.writerow((case.cid, e, witness_width(case, e), inst.degrees.r,
                            res.stats.get("max_index_family", ""), res.stats.get("table_cells", ""),
                            round(ms, 1), res.answer))
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="degmst", description="Degree-constrained spanning trees on bounded-width graphs.")
    p.add_argument("--version", action="version", version=f"degmst {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide an instance with one engine")
    s.add_argument("instance")
    s.add_argument("--engine", required=True, choices=ENGINES)
    s.add_argument("--decomp", help=".td file (tw, pw)")
    s.add_argument("--arrangement", help=".arr file (ctw)")
    s.add_argument("--nlc", help=".nlc file (nlc)")
    s.add_argument("--reps", type=int, default=20)
    s.add_argument("--seed", type=int)
    s.add_argument("--join", choices=("auto", "fast", "naive"), default="auto")
    s.add_argument("--min-cost", action="store_true", help="also report the cheapest witnessed cost")
    s.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("validate", help="check an instance and optional witnesses")
    s.add_argument("instance")
    s.add_argument("--decomp")
    s.add_argument("--arrangement")
    s.add_argument("--nlc")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("convert", help="normalize a file, or turn an .arr into a path .td")
    s.add_argument("input")
    s.add_argument("output")
    s.add_argument("--instance", help=".dmst file (needed for .arr -> .td)")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("gen", help="generate an instance and its witness files")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--k", type=int, default=2, help="width parameter (tw/pw bound, cut bound, labels, grid columns)")
    s.add_argument("--leaves", type=int)
    s.add_argument("--shape", choices=("tree", "path"), default="tree")
    s.add_argument("--policy", choices=POLICIES, default="mixed")
    s.add_argument("--rmax", type=int, default=3)
    s.add_argument("--max-weight", type=int, default=0)
    s.add_argument("--bound", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True, help="output path prefix")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("difftest", help="compare engines against the oracle")
    s.add_argument("--n-max", type=int, default=8)
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--exhaustive-n", type=int, default=4)
    s.add_argument("--engines", default=",".join(ALL_ENGINES))
    s.add_argument("--reps", type=int, default=20)
    s.add_argument("--seed", type=int)
    s.add_argument("--max-weight", type=int, default=3)
    s.add_argument("--weighted-frac", type=float, default=0.5)
    s.add_argument("--fn-budget", type=int, default=1)
    s.add_argument("--fault", choices=("forget",), help="switch on a deliberately broken transition")
    s.set_defaults(func=cmd_difftest)

    s = sub.add_parser("bench", help="CSV of index-family growth per width")
    s.add_argument("--engines", default="tw,pw")
    s.add_argument("--widths", default="1,2,3")
    s.add_argument("--n", type=int, default=12)
    s.add_argument("--count", type=int, default=3)
    s.add_argument("--policy", choices=POLICIES, default="bounded")
    s.add_argument("--rmax", type=int, default=3)
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    p = build_parser()
    a = p.parse_args(argv)
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return a.func(a)
    except (FormatError, UsageError, DecompositionError, NlcError, OSError, TableBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
