"""Text formats (.dmst, .td, .arr, .nlc) and the JSON result report.

Every parser collects all problems it can find before raising
``FormatError``; each problem carries a 1-based line and column and a
stable code. Comment lines start with ``c``.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from typing import NamedTuple

from .core import VARIANTS, DegreeSpec, Graph, Instance, SolveResult
from .decomp import LinearArrangement, NlcExpression, NlcJoin, NlcLeaf, TreeDecomposition

log = logging.getLogger(__name__)

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    code: str
    message: str

    def __str__(self):
        return f"{self.line}:{self.col}: {self.code}: {self.message}"


class FormatError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors[:5]) +
                         (f" (+{len(self.errors) - 5} more)" if len(self.errors) > 5 else ""))

    @property
    def codes(self) -> list:
        return [e.code for e in self.errors]


class _Lines:
    """Tokenised non-comment lines plus an error sink."""

    def __init__(self, text: str):
        self.rows = []
        self.errors = []
        self.warnings = []
        for no, raw in enumerate(text.splitlines(), 1):
            toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(raw)]
            if not toks or toks[0][0] == "c":
                continue
            self.rows.append((no, raw, toks))

    def err(self, line, col, code, msg):
        self.errors.append(Diagnostic(line, col, code, msg))

    def warn(self, line, col, code, msg):
        d = Diagnostic(line, col, code, msg)
        self.warnings.append(d)
        log.warning("%s", d)

    def ints(self, no, toks, start=0):
        out = []
        for tok, col in toks[start:]:
            try:
                out.append(int(tok))
            except ValueError:
                self.err(no, col, "bad-integer", f"expected an integer, got {tok!r}")
                return None
        return out

    def done(self, value):
        if self.errors:
            raise FormatError(self.errors)
        return value


# --------------------------------------------------------------------------
# .dmst


def parse_instance(text: str, warnings: list = None) -> Instance:
    """Parse a .dmst file. Duplicate d-lines: the last one wins (with a warning)."""
    L = _Lines(text)
    header = None
    edges, weights, degs, bound = [], [], {}, None
    for no, raw, toks in L.rows:
        kind = toks[0][0]
        if kind == "p":
            if header is not None:
                L.err(no, 1, "duplicate-header", "second problem line")
                continue
            if len(toks) != 6 or toks[1][0] != "dmst":
                L.err(no, 1, "bad-header", "expected 'p dmst <n> <m> <set|bounded|specified> <0|1>'")
                header = False
                continue
            nums = L.ints(no, [toks[2], toks[3]])
            variant, wflag = toks[4][0], toks[5][0]
            if variant not in VARIANTS:
                L.err(no, toks[4][1], "bad-variant", f"unknown variant {variant!r}")
            if wflag not in ("0", "1"):
                L.err(no, toks[5][1], "bad-header", "weighted flag must be 0 or 1")
            if nums is None or nums[0] < 1 or nums[1] < 0:
                if nums is not None:
                    L.err(no, toks[2][1], "bad-header", "need n >= 1 and m >= 0")
                header = False
                continue
            header = (nums[0], nums[1], variant, wflag == "1")
            continue
        if header is None:
            L.err(no, 1, "missing-header", "data before the problem line")
            header = False
        if not header:
            continue
        n, m, variant, weighted = header
        if kind == "e":
            want = 4 if weighted else 3
            if len(toks) != want:
                code = "weight-missing" if weighted and len(toks) == 3 else (
                    "weight-unexpected" if not weighted and len(toks) == 4 else "bad-edge")
                L.err(no, 1, code, f"edge line needs {want - 1} fields")
                continue
            vals = L.ints(no, toks, 1)
            if vals is None:
                continue
            if not all(1 <= x <= n for x in vals[:2]):
                L.err(no, toks[1][1], "vertex-range", f"endpoint outside 1..{n}")
                continue
            if weighted and vals[2] < 0:
                L.err(no, toks[3][1], "negative-weight", "weights must be >= 0")
                continue
            edges.append((vals[0], vals[1]))
            if weighted:
                weights.append(vals[2])
        elif kind == "d":
            vals = L.ints(no, toks, 1)
            if vals is None:
                continue
            if len(vals) < 2:
                L.err(no, 1, "bad-degree", "expected 'd v c d1 .. dc'")
                continue
            v, c, ds = vals[0], vals[1], vals[2:]
            if not 1 <= v <= n:
                L.err(no, toks[1][1], "vertex-range", f"vertex outside 1..{n}")
                continue
            if c != len(ds):
                L.err(no, toks[2][1], "degree-count", f"declared {c} values, found {len(ds)}")
                continue
            if variant != "set" and c != 1:
                L.err(no, toks[2][1], "degree-arity", f"{variant} variant takes exactly one value")
                continue
            if c < 1:
                L.err(no, toks[2][1], "degree-count", "empty degree list")
                continue
            if any(x < 1 for x in ds):
                L.err(no, toks[3][1], "degree-nonpositive", "degrees must be >= 1")
                continue
            if v in degs:
                L.warn(no, 1, "duplicate-degree", f"vertex {v} listed again; last line wins")
            degs[v] = ds
        elif kind == "b":
            vals = L.ints(no, toks, 1)
            if vals is None:
                continue
            if not weighted:
                L.err(no, 1, "bound-unexpected", "bound line in an unweighted instance")
            elif len(vals) != 1 or vals[0] < 0:
                L.err(no, 1, "bad-bound", "expected 'b B' with B >= 0")
            elif bound is not None:
                L.err(no, 1, "duplicate-bound", "second bound line")
            else:
                bound = vals[0]
        else:
            L.err(no, 1, "unknown-line", f"unknown line type {kind!r}")
    last = L.rows[-1][0] if L.rows else 1
    if header is None:
        L.err(last, 1, "missing-header", "no problem line")
    if header:
        n, m, variant, weighted = header
        if len(edges) != m and not any(e.code in ("bad-edge", "weight-missing", "weight-unexpected",
                                                  "vertex-range", "negative-weight", "bad-integer")
                                       for e in L.errors):
            L.err(last, 1, "edge-count", f"header declares {m} edges, found {len(edges)}")
        missing = [v for v in range(1, n + 1) if v not in degs]
        if missing:
            L.err(last, 1, "degree-missing", f"no d-line for vertices {missing[:10]}")
        if weighted and bound is None:
            L.err(last, 1, "bound-missing", "weighted instance without a bound line")
    if warnings is not None:
        warnings.extend(L.warnings)
    if L.errors:
        raise FormatError(L.errors)
    n, m, variant, weighted = header
    spec = DegreeSpec(variant, tuple(tuple(degs[v]) for v in range(1, n + 1)))
    return Instance(Graph(n, tuple(edges)), spec, tuple(weights) if weighted else None, bound)


def write_instance(inst: Instance) -> str:
    w = inst.weighted
    out = [f"p dmst {inst.n} {inst.m} {inst.variant} {int(w)}"]
    for i, (u, v) in enumerate(inst.graph.edges):
        out.append(f"e {u} {v} {inst.weights[i]}" if w else f"e {u} {v}")
    for v in inst.graph.vertices:
        vs = inst.degrees.values[v - 1]
        out.append(f"d {v} {len(vs)} " + " ".join(map(str, vs)))
    if w:
        out.append(f"b {inst.bound}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# .td


class TdFile(NamedTuple):
    td: TreeDecomposition
    n: int


def parse_td(text: str) -> TdFile:
    L = _Lines(text)
    head = None
    bags = {}
    edges = []
    for no, raw, toks in L.rows:
        kind = toks[0][0]
        if kind == "s":
            if head is not None:
                L.err(no, 1, "duplicate-header", "second solution line")
                continue
            if len(toks) != 5 or toks[1][0] != "td":
                L.err(no, 1, "bad-header", "expected 's td <bags> <max_bag_size> <n>'")
                head = False
                continue
            vals = L.ints(no, toks, 2)
            head = tuple(vals) if vals is not None else False
            continue
        if head is None:
            L.err(no, 1, "missing-header", "data before the solution line")
            head = False
        if kind == "b":
            vals = L.ints(no, toks, 1)
            if not vals:
                if vals is not None:
                    L.err(no, 1, "bad-bag", "bag line without an id")
                continue
            bid, vs = vals[0], vals[1:]
            if bid in bags:
                L.err(no, toks[1][1], "duplicate-bag", f"bag {bid} defined twice")
                continue
            if head and any(not 1 <= v <= head[2] for v in vs):
                L.err(no, 1, "vertex-range", f"bag {bid} names a vertex outside 1..{head[2]}")
            bags[bid] = frozenset(vs)
        else:
            vals = L.ints(no, toks)
            if vals is None:
                continue
            if len(vals) != 2:
                L.err(no, 1, "bad-tree-edge", "tree edge lines hold exactly two bag ids")
                continue
            edges.append((vals[0], vals[1]))
    last = L.rows[-1][0] if L.rows else 1
    if head is None:
        L.err(last, 1, "missing-header", "no solution line")
    if head:
        nb, size, n = head
        if len(bags) != nb:
            L.err(last, 1, "bag-count", f"header declares {nb} bags, found {len(bags)}")
        if sorted(bags) != list(range(1, len(bags) + 1)):
            L.err(last, 1, "bag-ids", "bag ids must be 1..#bags")
        actual = max((len(b) for b in bags.values()), default=0)
        if actual != size:
            L.err(last, 1, "bag-size", f"header declares max bag size {size}, found {actual}")
        for a, b in edges:
            if a not in bags or b not in bags:
                L.err(last, 1, "bad-tree-edge", f"tree edge ({a},{b}) names an unknown bag")
    if L.errors:
        raise FormatError(L.errors)
    return TdFile(TreeDecomposition(bags, tuple(edges)), head[2])


def write_td(td: TreeDecomposition, n: int) -> str:
    ids = sorted(td.bags)
    size = max((len(b) for b in td.bags.values()), default=0)
    out = [f"s td {len(ids)} {size} {n}"]
    for i in ids:
        out.append(" ".join(["b", str(i)] + [str(v) for v in sorted(td.bags[i])]))
    for a, b in td.tree_edges:
        out.append(f"{a} {b}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# .arr


def parse_arr(text: str) -> LinearArrangement:
    L = _Lines(text)
    n = None
    order = None
    for no, raw, toks in L.rows:
        if toks[0][0] == "s":
            if n is not None:
                L.err(no, 1, "duplicate-header", "second solution line")
                continue
            if len(toks) != 3 or toks[1][0] != "arr":
                L.err(no, 1, "bad-header", "expected 's arr <n>'")
                n = False
                continue
            vals = L.ints(no, toks, 2)
            n = vals[0] if vals else False
            continue
        if n is None:
            L.err(no, 1, "missing-header", "data before the solution line")
            n = False
        if order is not None:
            L.err(no, 1, "extra-line", "only one permutation line is allowed")
            continue
        order = L.ints(no, toks) or []
        if n and sorted(order) != list(range(1, n + 1)):
            L.err(no, 1, "not-permutation", f"line is not a permutation of 1..{n}")
    last = L.rows[-1][0] if L.rows else 1
    if n is None:
        L.err(last, 1, "missing-header", "no solution line")
    elif n and order is None:
        L.err(last, 1, "missing-permutation", "no permutation line")
    if L.errors:
        raise FormatError(L.errors)
    return LinearArrangement(tuple(order))


def write_arr(arr: LinearArrangement) -> str:
    return f"s arr {len(arr.order)}\n" + " ".join(map(str, arr.order)) + "\n"


# --------------------------------------------------------------------------
# .nlc

_JOIN = re.compile(r"^\s*n\s+(\S+)\s+join\s+(\S+)\s+(\S+)\s+a\{([^}]*)\}\s*b\{([^}]*)\}\s*$")


def parse_nlc(text: str) -> NlcExpression:
    """Parse a .nlc file. A leaf line may name its vertex ('n id leaf L v');
    vertices of leaves without one are numbered in left-to-right order."""
    L = _Lines(text)
    head = None
    nodes = {}
    root = None
    leaf_line = {}
    for no, raw, toks in L.rows:
        kind = toks[0][0]
        if kind == "s":
            if head is not None:
                L.err(no, 1, "duplicate-header", "second solution line")
                continue
            if len(toks) != 4 or toks[1][0] != "nlc":
                L.err(no, 1, "bad-header", "expected 's nlc <k> <nodes>'")
                head = False
                continue
            vals = L.ints(no, toks, 2)
            head = tuple(vals) if vals and vals[0] >= 1 else False
            if vals and vals[0] < 1:
                L.err(no, toks[2][1], "bad-header", "k must be >= 1")
            continue
        if head is None:
            L.err(no, 1, "missing-header", "data before the solution line")
            head = False
        if kind == "r":
            vals = L.ints(no, toks, 1)
            if vals is None:
                continue
            if len(vals) != 1:
                L.err(no, 1, "bad-root", "expected 'r id'")
            elif root is not None:
                L.err(no, 1, "duplicate-root", "second root line")
            else:
                root = vals[0]
            continue
        if kind != "n" or len(toks) < 3:
            L.err(no, 1, "unknown-line", f"unknown line {raw.strip()!r}")
            continue
        try:
            nid = int(toks[1][0])
        except ValueError:
            L.err(no, toks[1][1], "bad-integer", f"expected an integer, got {toks[1][0]!r}")
            continue
        if nid in nodes:
            L.err(no, toks[1][1], "duplicate-node", f"node {nid} defined twice")
            continue
        k = head[0] if head else None
        if toks[2][0] == "leaf":
            vals = L.ints(no, toks, 3)
            if vals is None:
                continue
            if len(vals) not in (1, 2):
                L.err(no, 1, "bad-leaf", "expected 'n id leaf L [v]'")
                continue
            if k and not 1 <= vals[0] <= k:
                L.err(no, toks[3][1], "label-range", f"label outside 1..{k}")
            nodes[nid] = NlcLeaf(vals[0], vals[1] if len(vals) == 2 else None)
            leaf_line[nid] = no
        elif toks[2][0] == "join":
            mt = _JOIN.match(raw)
            if not mt:
                L.err(no, 1, "bad-join", "expected 'n id join left right a{ i,j ; .. } b{ 1:x .. k:y }'")
                continue
            try:
                left, right = int(mt.group(2)), int(mt.group(3))
            except ValueError:
                L.err(no, 1, "bad-integer", "child ids must be integers")
                continue
            alpha = set()
            ok = True
            for part in mt.group(4).split(";"):
                if not part.strip():
                    continue
                bits = part.replace(",", " ").split()
                try:
                    i, j = map(int, bits)
                except ValueError:
                    L.err(no, mt.start(4) + 1, "bad-alpha", f"bad label pair {part.strip()!r}")
                    ok = False
                    continue
                if k and not (1 <= i <= k and 1 <= j <= k):
                    L.err(no, mt.start(4) + 1, "alpha-range", f"pair ({i},{j}) outside [1,{k}]^2")
                    ok = False
                alpha.add((i, j))
            beta = {}
            for part in mt.group(5).split():
                try:
                    i, x = map(int, part.split(":"))
                except ValueError:
                    L.err(no, mt.start(5) + 1, "bad-beta", f"bad relabelling entry {part!r}")
                    ok = False
                    continue
                if i in beta:
                    L.err(no, mt.start(5) + 1, "bad-beta", f"label {i} mapped twice")
                    ok = False
                beta[i] = x
            if k and (sorted(beta) != list(range(1, k + 1)) or any(not 1 <= x <= k for x in beta.values())):
                L.err(no, mt.start(5) + 1, "beta-not-total", f"relabelling must map every label of 1..{k} into 1..{k}")
                ok = False
            if ok:
                nodes[nid] = NlcJoin(left, right, frozenset(alpha),
                                     tuple(beta[i] for i in range(1, len(beta) + 1)))
        else:
            L.err(no, toks[2][1], "unknown-node", f"node kind {toks[2][0]!r}")
    last = L.rows[-1][0] if L.rows else 1
    if head is None:
        L.err(last, 1, "missing-header", "no solution line")
    if root is None:
        L.err(last, 1, "missing-root", "no root line")
    if L.errors:
        raise FormatError(L.errors)
    k, count = head
    if len(nodes) != count:
        L.err(last, 1, "node-count", f"header declares {count} nodes, found {len(nodes)}")
    if root not in nodes:
        L.err(last, 1, "bad-root", f"root {root} is not a node")
    parents = {}
    for nid, nd in nodes.items():
        if isinstance(nd, NlcJoin):
            for ch in (nd.left, nd.right):
                if ch not in nodes:
                    L.err(last, 1, "unknown-child", f"join {nid} refers to unknown node {ch}")
                elif ch in parents or ch == nid:
                    L.err(last, 1, "not-a-tree", f"node {ch} has more than one parent")
                else:
                    parents[ch] = nid
    if not L.errors:
        orphans = sorted(set(nodes) - set(parents) - {root})
        if root in parents:
            L.err(last, 1, "not-a-tree", f"root {root} has a parent")
        if orphans:
            L.err(last, 1, "not-a-tree", f"nodes {orphans[:10]} are not below the root")
    if not L.errors:
        # parent links form a forest rooted at `root`; any leftover is a cycle
        seen = set()
        stack = [root]
        while stack:
            x = stack.pop()
            seen.add(x)
            if isinstance(nodes[x], NlcJoin):
                stack += [nodes[x].left, nodes[x].right]
        if seen != set(nodes):
            L.err(last, 1, "not-a-tree", "expression contains a cycle")
    if L.errors:
        raise FormatError(L.errors)
    expr = NlcExpression(k, nodes, root)
    leaves = expr.leaves()
    named = [x for x in leaves if nodes[x].vertex is not None]
    if named and len(named) != len(leaves):
        L.err(last, 1, "mixed-leaves", "either every leaf names its vertex or none does")
    elif not named:
        for i, x in enumerate(leaves, 1):
            nodes[x] = NlcLeaf(nodes[x].label, i)
    else:
        vs = sorted(nodes[x].vertex for x in leaves)
        if vs != list(range(1, len(leaves) + 1)):
            L.err(last, 1, "leaf-vertices", "leaf vertices must be exactly 1..#leaves")
    if L.errors:
        raise FormatError(L.errors)
    return NlcExpression(k, nodes, root)


def write_nlc(expr: NlcExpression) -> str:
    out = [f"s nlc {expr.k} {len(expr.nodes)}"]
    for nid in sorted(expr.nodes):
        nd = expr.nodes[nid]
        if isinstance(nd, NlcLeaf):
            out.append(f"n {nid} leaf {nd.label} {nd.vertex}")
        else:
            a = " ; ".join(f"{i},{j}" for i, j in sorted(nd.alpha))
            b = " ".join(f"{i}:{x}" for i, x in enumerate(nd.beta, 1))
            out.append(f"n {nid} join {nd.left} {nd.right} a{{ {a} }} b{{ {b} }}".replace("a{  }", "a{ }"))
    out.append(f"r {expr.root}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# result report

REPORT_STATS = ("max_index_family", "table_cells", "ms")


def report_dict(res: SolveResult, files: dict = None) -> dict:
    stats = {k: res.stats.get(k) for k in REPORT_STATS}
    extra = {k: v for k, v in res.stats.items() if k not in REPORT_STATS}
    return {
        "answer": res.answer,
        "min_cost": res.min_cost,
        "engine": res.engine,
        "reps": res.reps,
        "seed": res.seed,
        "witness": None if res.witness is None else {"omega1": res.witness[0], "omega2": res.witness[1]},
        "stats": stats,
        "extra": extra,
        "files": dict(files or {}),
    }


def write_report(res: SolveResult, files: dict = None) -> str:
    return json.dumps(report_dict(res, files), sort_keys=True)


def read_report(text: str) -> dict:
    d = json.loads(text)
    if d.get("answer") not in ("yes", "no"):
        raise ValueError("report answer must be 'yes' or 'no'")
    return d


def read_file(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_file(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
