"""Lazy-colouring Cut&Count over nice path decompositions, plus cutwidth mode.

Per-vertex state is a small integer s for (degree so far, colour):

    s = 0          -> (0, up)
    s = 2f-1, 2f   -> (f, L), (f, R)   for 0 < f < d(v)
    s = 2d(v)-1    -> (d(v), up)

so a vertex has at most 2*d(v) states and f = (s + 1) // 2.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .core import Instance
from .cutcount import FAULTS, check_table_budget, InvariantViolation, IsolationWeights, RootTable, WeightDomain
from .decomp import (FORGET, INTRO, INTRO_EDGE, JOIN, LEAF, LinearArrangement, NiceDecomposition,
                     arrangement_to_nice_path)

L_, R_, UP = "L", "R", "up"


def state_f(s: int) -> int:
    return (s + 1) // 2


def state_colour(s: int, d: int) -> str:
    if s == 0 or s == 2 * d - 1:
        return UP
    return L_ if s % 2 else R_


def make_state(f: int, colour: str, d: int) -> int:
    if f == 0:
        return 0
    if f == d:
        return 2 * d - 1
    return 2 * f - 1 if colour == L_ else 2 * f


@dataclass(frozen=True)
class PwIndexFamily:
    """I_x for one bag: states per vertex capped by q(v) = min(deg_Gx(v), d(v))."""

    bag: tuple       # sorted vertices
    d: tuple         # d(v) per bag vertex
    q: tuple         # q_x(v) per bag vertex

    def states(self, p: int) -> list:
        d, q = self.d[p], self.q[p]
        out = [0]
        for f in range(1, q + 1):
            out += [2 * d - 1] if f == d else [2 * f - 1, 2 * f]
        return out

    @property
    def size(self) -> int:
        return math.prod(len(self.states(p)) for p in range(len(self.bag)))

    def encode(self, key: tuple) -> int:
        code = 0
        for p in reversed(range(len(self.bag))):
            st = self.states(p)
            code = code * len(st) + st.index(key[p])
        return code

    def decode(self, code: int) -> tuple:
        out = []
        for p in range(len(self.bag)):
            st = self.states(p)
            code, digit = divmod(code, len(st))
            out.append(st[digit])
        return tuple(out)


def family_size(bag, d, q) -> int:
    size = 1
    for v in bag:
        qv, dv = q[v], d[v]
        size *= 1 + 2 * min(qv, dv - 1) + (1 if qv >= dv else 0)
    return size


def solve_pw(inst: Instance, nice: NiceDecomposition, iso: IsolationWeights, w1_cap: int,
             ctw: int = None, trace=None) -> RootTable:
    """Run the DP; ``inst`` must already be a set-variant instance.

    With ``ctw`` set, every node is checked against the cutwidth bound.
    ``trace`` (a list) receives (node, table) pairs for white-box tests.
    """
    t0 = time.perf_counter()
    if not nice.is_path:
        raise ValueError("pathwidth engine needs a join-free decomposition")
    G = inst.graph
    n = G.n
    dom = WeightDomain(n, G.m, inst.max_weight, w1_cap, _pw_slot_bits(inst))
    allowed = {v: inst.allowed(v) for v in G.vertices}
    d = {v: max(allowed[v]) for v in G.vertices}
    r = max(d.values())
    deg = {v: 0 for v in G.vertices}
    eidx = G.edge_index
    ctw_cap = 2 * n * 3 ** ctw if ctw is not None else None

    table = None
    bag = ()
    max_family = max_occupied = cells = 0
    for i, nd in enumerate(nice.nodes):
        if nd.kind == LEAF:
            table, bag = {(): dom.one}, ()
        elif nd.kind == INTRO:
            v = nd.vertex
            bag_new = tuple(sorted(bag + (v,)))
            p = bag_new.index(v)
            table = {k[:p] + (0,) + k[p:]: x for k, x in table.items()}
            bag = bag_new
        elif nd.kind == FORGET:
            v = nd.vertex
            p = bag.index(v)
            D = allowed[v] if "forget" not in FAULTS else range(1, d[v] + 1)
            out = {}
            for k, x in table.items():
                if state_f(k[p]) in D:
                    nk = k[:p] + k[p + 1:]
                    y = out.get(nk)
                    out[nk] = x if y is None else y + x
            table = {k: dom.reduce(x) for k, x in out.items()}
            table = {k: x for k, x in table.items() if x}
            bag = bag[:p] + bag[p + 1:]
        elif nd.kind == INTRO_EDGE:
            u, v = nd.edge
            e = eidx[nd.edge]
            table = _introduce_edge(table, bag, u, v, d[u], d[v], dom, inst.weight(e), iso.values[e])
            deg[u] += 1
            deg[v] += 1
        elif nd.kind == JOIN:
            raise ValueError("join node in a path decomposition")
        q = {v: min(deg[v], d[v]) for v in bag}
        fam = family_size(bag, d, q)
        if fam > (2 * r) ** len(bag):
            raise InvariantViolation(f"node {i}: index family {fam} above (2r)^|B|")
        if ctw_cap is not None and fam > ctw_cap:
            raise InvariantViolation(f"node {i}: index family {fam} above 2n*3^ctw = {ctw_cap}")
        max_family = max(max_family, fam)
        check_table_budget(len(table), dom, i)
        max_occupied = max(max_occupied, len(table))
        cells += len(table) * dom.cells
        if trace is not None:
            trace.append((i, dict(table), bag))
    stats = {"max_index_family": max_family, "max_occupied": max_occupied, "table_cells": cells,
             "engine_ms": (time.perf_counter() - t0) * 1000}
    return RootTable(dom, table, stats)


def _pw_slot_bits(inst: Instance) -> int:
    # a forget sums at most 2|D(v)| reduced entries, an edge at most 3
    terms = max(2 * max(len(inst.allowed(v)) for v in inst.graph.vertices), 3)
    bits = (3 * terms).bit_length()
    return max(8, -(-bits // 8) * 8)


def _introduce_edge(table, bag, u, v, du, dv, dom, w, w2):
    pu, pv = bag.index(u), bag.index(v)
    out = dict(table)
    for k, x in table.items():
        su, sv = k[pu], k[pv]
        fu, fv = state_f(su), state_f(sv)
        if fu >= du or fv >= dv:
            continue
        cu, cv = state_colour(su, du), state_colour(sv, dv)
        real = {c for c in (cu, cv) if c != UP}
        if len(real) == 2:
            continue
        sides = real or (L_, R_)
        y = dom.shift(x, w, w2)
        if not y:
            continue
        for s in sides:
            nk = list(k)
            nk[pu] = make_state(fu + 1, s, du)
            nk[pv] = make_state(fv + 1, s, dv)
            nk = tuple(nk)
            z = out.get(nk)
            out[nk] = y if z is None else z + y
    return {k: x for k, x in ((k, dom.reduce(x)) for k, x in out.items()) if x}


def solve_ctw(inst: Instance, arr: LinearArrangement, iso: IsolationWeights, w1_cap: int,
              nice: NiceDecomposition = None) -> RootTable:
    if nice is None:
        nice = arrangement_to_nice_path(inst.graph, arr)
    ctw = arr.cutwidth(inst.graph)
    root = solve_pw(inst, nice, iso, w1_cap, ctw=ctw)
    root.stats["ctw"] = ctw
    return root
