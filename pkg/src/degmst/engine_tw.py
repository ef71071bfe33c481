"""Cut&Count over nice tree decompositions.

A bag vertex carries digit 2*f + c with f in [0, r] and colour c (0 = L,
1 = R); a table index is the tuple of digits over the sorted bag. Tables are
sparse dicts from index to packed polynomial (see ``cutcount``).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from gmpy2 import mpz

from .core import Instance
from .cutcount import FAULTS, check_table_budget, IsolationWeights, RootTable, WeightDomain
from .decomp import FORGET, INTRO, INTRO_EDGE, JOIN, LEAF, NiceDecomposition


@dataclass(frozen=True)
class TwIndexFamily:
    """[r]_0^B x {L,R}^B in mixed radix 2(r+1) over the sorted bag."""

    bag: tuple
    r: int

    @property
    def radix(self) -> int:
        return 2 * (self.r + 1)

    @property
    def size(self) -> int:
        return self.radix ** len(self.bag)

    def encode(self, key: tuple) -> int:
        code = 0
        for digit in reversed(key):
            code = code * self.radix + digit
        return code

    def decode(self, code: int) -> tuple:
        out = []
        for _ in self.bag:
            code, digit = divmod(code, self.radix)
            out.append(digit)
        return tuple(out)

    def split(self, key: tuple):
        """(f, c) tuples of an index."""
        return tuple(x >> 1 for x in key), tuple(x & 1 for x in key)


def tw_leaf(dom: WeightDomain) -> dict:
    return {(): dom.one}


def tw_introduce_vertex(table: dict, bag: tuple, v: int):
    new_bag = tuple(sorted(bag + (v,)))
    p = new_bag.index(v)
    out = {}
    for k, x in table.items():
        out[k[:p] + (0,) + k[p:]] = x
        out[k[:p] + (1,) + k[p:]] = x
    return out, new_bag


def tw_forget(table: dict, bag: tuple, v: int, allowed, dom: WeightDomain):
    if "forget" in FAULTS:
        allowed = range(1, max(allowed) + 1)
    p = bag.index(v)
    out = {}
    for k, x in table.items():
        if (k[p] >> 1) in allowed:
            nk = k[:p] + k[p + 1:]
            y = out.get(nk)
            out[nk] = x if y is None else y + x
    return _clean(out, dom), bag[:p] + bag[p + 1:]


def tw_introduce_edge(table: dict, bag: tuple, u: int, v: int, r: int, dom: WeightDomain, w: int, w2: int):
    pu, pv = bag.index(u), bag.index(v)
    out = dict(table)
    for k, x in table.items():
        du, dv = k[pu], k[pv]
        if (du ^ dv) & 1 or (du >> 1) >= r or (dv >> 1) >= r:
            continue
        y = dom.shift(x, w, w2)
        if not y:
            continue
        nk = list(k)
        nk[pu] += 2
        nk[pv] += 2
        nk = tuple(nk)
        z = out.get(nk)
        out[nk] = y if z is None else z + y
    return _clean(out, dom)


def _clean(table: dict, dom: WeightDomain) -> dict:
    out = {}
    for k, x in table.items():
        x = dom.reduce(x)
        if x:
            out[k] = x
    return out


FAST_JOIN_BYTES = 1 << 26


def _group_by_colour(table: dict) -> dict:
    groups = {}
    for k, x in table.items():
        groups.setdefault(tuple(d & 1 for d in k), []).append((k, x))
    return groups


def _digit_code(k, P) -> int:
    code = 0
    for d in reversed(k):
        code = code * P + (d >> 1)
    return code


def _join_group_naive(items1, items2, r, dom, out):
    for k1, x1 in items1:
        for k2, x2 in items2:
            k = tuple(a + (b & ~1) for a, b in zip(k1, k2))
            if any((d >> 1) > r for d in k):
                continue
            y = dom.reduce(x1 * x2)
            if y:
                z = out.get(k)
                out[k] = y if z is None else dom.reduce(z + y)


def _join_group_fast(c, items1, items2, r, dom, out):
    P = 2 * r + 1
    stride = 2 * dom.L * dom.sb               # bytes per degree block
    plen = dom.L * dom.sb
    b = len(c)
    packed = []
    for items in (items1, items2):
        codes = [_digit_code(k, P) for k, _ in items]
        buf = bytearray((max(codes) + 1) * stride)
        for (k, x), code in zip(items, codes):
            off = code * stride
            buf[off:off + plen] = int(x).to_bytes(plen, "little")
        packed.append(mpz(int.from_bytes(buf, "little")))
    prod = packed[0] * packed[1]
    nbytes = (prod.bit_length() + 7) // 8
    raw = int(prod).to_bytes(nbytes, "little")
    for f in itertools.product(range(r + 1), repeat=b):
        code = 0
        for x in reversed(f):
            code = code * P + x
        off = code * stride
        if off >= nbytes:
            continue
        y = dom.reduce(mpz(int.from_bytes(raw[off:off + plen], "little")))
        if y:
            k = tuple(2 * fi + ci for fi, ci in zip(f, c))
            z = out.get(k)
            out[k] = y if z is None else dom.reduce(z + y)


def tw_join_naive(t1: dict, t2: dict, r: int, dom: WeightDomain) -> dict:
    out = {}
    g2 = _group_by_colour(t2)
    for c, items1 in _group_by_colour(t1).items():
        if c in g2:
            _join_group_naive(items1, g2[c], r, dom, out)
    return {k: x for k, x in out.items() if x}


def tw_join_fast(t1: dict, t2: dict, r: int, dom: WeightDomain) -> dict:
    """Same result as the naive join via one product per colouring.

    Every degree coordinate becomes a digit of radix 2r+1, so the degree
    sums of two operands never carry, and each degree block is 2L slots wide
    so the (a, w1, w2) product of one block pair cannot reach the next.
    Blocks are assembled and split through byte buffers.
    """
    out = {}
    g2 = _group_by_colour(t2)
    for c, items1 in _group_by_colour(t1).items():
        if c in g2:
            _join_group_fast(c, items1, g2[c], r, dom, out)
    return {k: x for k, x in out.items() if x}


def tw_join_auto(t1: dict, t2: dict, r: int, dom: WeightDomain) -> dict:
    """Per colouring, the fast product when the operands are dense enough
    to pay for the padded buffers, pairwise products otherwise."""
    P = 2 * r + 1
    stride = 2 * dom.L * dom.sb
    out = {}
    g2 = _group_by_colour(t2)
    for c, items1 in _group_by_colour(t1).items():
        items2 = g2.get(c)
        if not items2:
            continue
        span = sum(max(_digit_code(k, P) for k, _ in items) + 1 for items in (items1, items2))
        if span * stride <= FAST_JOIN_BYTES and len(items1) * len(items2) > 16 * span:
            _join_group_fast(c, items1, items2, r, dom, out)
        else:
            _join_group_naive(items1, items2, r, dom, out)
    return {k: x for k, x in out.items() if x}


def tw_slot_bits(r: int, max_bag: int, dom: WeightDomain, join: str) -> int:
    terms = (r + 1) ** max_bag if join != "naive" else 1
    bits = (9 * dom.L * terms + 3).bit_length() + 1
    return max(8, -(-bits // 8) * 8)


def solve_tw(inst: Instance, nice: NiceDecomposition, iso: IsolationWeights, w1_cap: int,
             join: str = "auto", trace=None) -> RootTable:
    t0 = time.perf_counter()
    G = inst.graph
    allowed = {v: inst.allowed(v) for v in G.vertices}
    r = max(max(s) for s in allowed.values())
    probe = WeightDomain(G.n, G.m, inst.max_weight, w1_cap)
    has_join = not nice.is_path
    bits = tw_slot_bits(r, nice.width + 1, probe, join) if has_join else 8
    dom = WeightDomain(G.n, G.m, inst.max_weight, w1_cap, bits)
    joiner = {"fast": tw_join_fast, "naive": tw_join_naive, "auto": tw_join_auto}[join]
    eidx = G.edge_index
    tables, bags = {}, {}
    max_family = max_occupied = cells = 0
    for i, nd in enumerate(nice.nodes):
        if nd.kind == LEAF:
            t, bag = tw_leaf(dom), ()
        elif nd.kind == INTRO:
            t, bag = tw_introduce_vertex(tables.pop(nd.children[0]), bags.pop(nd.children[0]), nd.vertex)
        elif nd.kind == FORGET:
            c = nd.children[0]
            t, bag = tw_forget(tables.pop(c), bags.pop(c), nd.vertex, allowed[nd.vertex], dom)
        elif nd.kind == INTRO_EDGE:
            c = nd.children[0]
            u, v = nd.edge
            e = eidx[nd.edge]
            bag = bags.pop(c)
            t = tw_introduce_edge(tables.pop(c), bag, u, v, r, dom, inst.weight(e), iso.values[e])
        elif nd.kind == JOIN:
            c1, c2 = nd.children
            bag = bags.pop(c1)
            bags.pop(c2)
            t = joiner(tables.pop(c1), tables.pop(c2), r, dom)
        else:
            raise ValueError(f"unknown node kind {nd.kind}")
        tables[i], bags[i] = t, bag
        max_family = max(max_family, (2 * (r + 1)) ** len(bag))
        check_table_budget(len(t), dom, i)
        max_occupied = max(max_occupied, len(t))
        cells += len(t) * dom.cells
        if trace is not None:
            trace.append((i, dict(t), bag))
    root = tables[nice.root]
    stats = {"max_index_family": max_family, "max_occupied": max_occupied, "table_cells": cells,
             "engine_ms": (time.perf_counter() - t0) * 1000}
    return RootTable(dom, root, stats)
