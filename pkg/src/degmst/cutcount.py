"""Cut&Count scaffolding shared by the tw/pw/ctw engines.

Tables map an index (f, c) to a polynomial over the weight axes (a, w1, w2)
with coefficients in Z4. A polynomial is stored as one big integer: cell
(a, w1, w2) lives in a ``slot_bits`` wide slot at flat position

    idx = (a * W1p + w1) * W2 + w2

so adding tables is integer addition, shifting along all three axes at once
is a left shift, products are Kronecker-substituted convolutions, and the
reduction mod 4 is a bitwise AND with a mask holding 0b11 in each live slot.
Slots are byte aligned so rows can be read through ``to_bytes``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from gmpy2 import mpz

from .core import EarlyReject, Instance, SolveResult, screen


# names of deliberately broken transitions, switched on by the difftest harness
FAULTS: set = set()


# engines stop once one table would hold more packed bytes than this
TABLE_BYTES_LIMIT = 1 << 30


class TableBudgetExceeded(MemoryError):
    pass


def check_table_budget(entries: int, dom, node: int):
    size = entries * dom.L * dom.sb
    if size > TABLE_BYTES_LIMIT:
        raise TableBudgetExceeded(f"node {node}: table of {entries} entries needs ~{size >> 20} MiB "
                                  f"(limit {TABLE_BYTES_LIMIT >> 20} MiB)")


class InvariantViolation(AssertionError):
    """An internal bound or consistency check failed (a bug, not bad input)."""


class MalformedTable(ValueError):
    pass


@dataclass(frozen=True)
class IsolationWeights:
    values: tuple
    seed: int

    @property
    def Z(self) -> int:
        return 2 * len(self.values)


def sample_isolation_weights(inst: Instance, seed: int) -> IsolationWeights:
    m = inst.m
    rng = random.Random(seed)
    return IsolationWeights(tuple(rng.randint(0, 2 * m) for _ in range(m)), seed)


def _round_bits(bits: int) -> int:
    return max(8, -(-bits // 8) * 8)


class WeightDomain:
    """Packed (a, w1, w2) cells of one table entry.

    The a axis stops at n-1: edge counts never decrease along the DP, so
    cells with a >= n can never feed the root cell a = n-1. For the same
    reason w1 is cut at ``w1_cap``; w2 never exceeds a*Z and needs no cut.
    The w1 stride is padded so neither an edge shift nor a product can carry
    a live cell into the next a row.
    """

    def __init__(self, n: int, m: int, max_weight: int, w1_cap: int, slot_bits: int = 8):
        self.n = n
        self.A = max(n, 1)
        self.Z = 2 * m
        self.W = max_weight
        self.W1 = w1_cap + 1
        self.W1p = max(2 * self.W1 - 1, self.W1 + max_weight)
        self.W2 = (n - 1) * self.Z + 1 if n >= 1 else 1
        self.row = self.W1p * self.W2
        self.L = self.A * self.row
        if slot_bits % 8:
            raise ValueError("slot width must be a multiple of 8")
        self.s = slot_bits
        self.sb = slot_bits // 8
        cell = b"\x03" + b"\x00" * (self.sb - 1)
        live = cell * self.W2
        dead = b"\x00" * (self.sb * self.W2)
        arow = live * self.W1 + dead * (self.W1p - self.W1)
        self.mask = mpz(int.from_bytes(arow * self.A, "little"))
        self.one = mpz(1)

    @classmethod
    def for_product(cls, n, m, max_weight, w1_cap, terms: int) -> "WeightDomain":
        """Domain whose slots can hold a sum of ``terms`` products of cells."""
        probe = cls(n, m, max_weight, w1_cap)
        bits = (9 * probe.L * max(terms, 1) + 3).bit_length() + 1
        return cls(n, m, max_weight, w1_cap, _round_bits(bits))

    @property
    def cells(self) -> int:
        return self.A * self.W1 * self.W2

    def index(self, a: int, w1: int, w2: int) -> int:
        return (a * self.W1p + w1) * self.W2 + w2

    def shift(self, x, w: int, w2: int):
        """Move every cell by (1, w, w2) and drop what leaves the domain."""
        off = self.row + w * self.W2 + w2
        return (x << (off * self.s)) & self.mask

    def reduce(self, x):
        return x & self.mask

    def cell(self, x, a: int, w1: int, w2: int) -> int:
        return int((x >> (self.index(a, w1, w2) * self.s)) & 0xFF) & 3

    def nonzero_cells(self, x) -> dict:
        out = {}
        x = self.reduce(x)
        data = int(x).to_bytes(self.L * self.sb, "little")
        for idx in range(self.L):
            v = data[idx * self.sb]
            if v:
                a, rest = divmod(idx, self.row)
                w1, w2 = divmod(rest, self.W2)
                out[(a, w1, w2)] = v
        return out

    def pack(self, cells: dict):
        """Inverse of nonzero_cells (values taken mod 4)."""
        x = 0
        for (a, w1, w2), v in cells.items():
            if v % 4:
                x |= (v % 4) << (self.index(a, w1, w2) * self.s)
        return mpz(x)

    def row_bytes(self, x, a: int, w1: int) -> bytes:
        width = self.W2 * self.s
        block = (x >> (self.index(a, w1, 0) * self.s)) & ((mpz(1) << width) - 1)
        return int(block).to_bytes(self.W2 * self.sb, "little")[:: self.sb]


@dataclass
class RootTable:
    domain: WeightDomain
    entries: dict                  # must only hold the empty index
    stats: dict = field(default_factory=dict)


def decide(root: RootTable, bound: int):
    """(yes, (w1, w2)) from the root table; the smallest witnessing w1 wins."""
    for key in root.entries:
        if key != ():
            raise MalformedTable(f"root table has a non-empty index {key!r}")
    x = root.entries.get((), mpz(0))
    dom = root.domain
    if not x:
        return False, None
    x = dom.reduce(x)
    a = dom.n - 1
    for w1 in range(min(bound, dom.W1 - 1) + 1):
        row = dom.row_bytes(x, a, w1)
        j = row.find(2)
        if j >= 0:
            return True, (w1, j)
    return False, None


# engine runner: (prepared instance, isolation weights, w1 cap) -> RootTable
Runner = Callable[[Instance, IsolationWeights, int], RootTable]


def _merge_stats(acc: dict, st: dict):
    for k, v in st.items():
        if k.startswith("max_") or k == "ctw":
            acc[k] = max(acc.get(k, 0), v)
        elif isinstance(v, (int, float)):
            acc[k] = acc.get(k, 0) + v


def amplified_solve(inst: Instance, runner: Runner, reps: int = 20, seed: Optional[int] = None,
                    engine: str = "?", stop_on_yes: bool = True) -> SolveResult:
    if reps < 1:
        raise ValueError("reps must be at least 1")
    if seed is None:
        seed = time.time_ns() % (2 ** 63)
    t0 = time.perf_counter()
    res = SolveResult("no", engine, reps=0, seed=seed, one_sided=True)
    prepared = screen(inst)
    if isinstance(prepared, EarlyReject):
        res.stats["screen"] = prepared.reason
    else:
        bound = inst.bound if inst.weighted else 0
        w1_cap = min(bound, (prepared.n - 1) * prepared.max_weight)
        rng = random.Random(seed)
        for _ in range(reps):
            iso = sample_isolation_weights(prepared, rng.getrandbits(63))
            root = runner(prepared, iso, w1_cap)
            res.reps += 1
            _merge_stats(res.stats, root.stats)
            yes, wit = decide(root, bound)
            if yes:
                if res.witness is None or wit[0] < res.witness[0]:
                    res.witness = wit
                res.answer = "yes"
                if stop_on_yes:
                    break
        if res.yes and inst.weighted:
            res.min_cost = res.witness[0]
    res.stats["ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return res


def min_cost(inst: Instance, runner: Runner, reps: int = 20, seed: Optional[int] = None) -> Optional[int]:
    """Smallest w1 carrying a witness over all repetitions (full w1 axis)."""
    if not inst.weighted:
        return None
    prepared = screen(inst)
    if isinstance(prepared, EarlyReject):
        return None
    if seed is None:
        seed = time.time_ns() % (2 ** 63)
    full = (prepared.n - 1) * prepared.max_weight
    rng = random.Random(seed)
    best = None
    for _ in range(reps):
        iso = sample_isolation_weights(prepared, rng.getrandbits(63))
        root = runner(prepared, iso, full)
        yes, wit = decide(root, full if best is None else best - 1)
        if yes:
            best = wit[0]
    return best
