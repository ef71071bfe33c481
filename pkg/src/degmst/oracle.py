"""Brute-force reference solver and exact Cut&Count counting."""

from __future__ import annotations

import itertools
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .core import Graph, Instance, SolveResult, screen, EarlyReject

DEFAULT_CAP = 10


class OracleCapExceeded(ValueError):
    pass


def _check_cap(G: Graph, cap: int):
    if G.n > cap:
        raise OracleCapExceeded(f"n={G.n} above oracle cap {cap}")


class _DSU:
    def __init__(self, n):
        self.p = list(range(n + 1))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.p[a] = b
        return True


def enumerate_spanning_trees(G: Graph, cap: int = DEFAULT_CAP, degree_ok=None, allowed=None):
    """Yield every spanning tree as a tuple of edge indices.

    Include/exclude recursion over the edge list. A branch is abandoned once
    the remaining edges can no longer connect the current components, or
    when the optional ``degree_ok(v, deg)`` rejects a partial degree.

    With ``allowed`` (degree sets indexed by vertex, slot 0 unused) only
    trees meeting every set are yielded: a vertex is checked as soon as its
    last incident edge is decided, and a branch dies once some vertex can
    no longer reach its smallest allowed degree.
    """
    _check_cap(G, cap)
    if not G.is_connected():
        raise ValueError("graph is disconnected")
    n, edges = G.n, G.edges
    m = len(edges)
    deg = [0] * (n + 1)
    left = [0] * (n + 1)          # undecided incident edges
    for u, v in edges:
        left[u] += 1
        left[v] += 1
    low = [0] + [min(allowed[v]) for v in range(1, n + 1)] if allowed else None
    chosen = []

    def settled(x):
        # deg[x] can still grow by left[x]; all decided once left[x] == 0
        if low is None:
            return True
        if deg[x] + left[x] < low[x]:
            return False
        return left[x] or deg[x] in allowed[x]

    def sums_ok():
        # final degrees must sum to 2(n-1); compare with what each vertex can still reach
        lo = hi = 0
        for x in range(1, n + 1):
            reach = [t for t in allowed[x] if deg[x] <= t <= deg[x] + left[x]]
            if not reach:
                return False
            lo += min(reach)
            hi += max(reach)
        return lo <= 2 * (n - 1) <= hi

    def rec(i, dsu_parent, comps):
        if comps == 1:
            if low is None or all(deg[x] in allowed[x] for x in range(1, n + 1)):
                yield tuple(chosen)
            return
        if m - i < comps - 1:
            return
        if low is not None and not sums_ok():
            return
        # remaining edges must still be able to join everything
        d = _DSU(n)
        d.p = list(dsu_parent)
        for j in range(i, m):
            d.union(*edges[j])
        if len({d.find(v) for v in range(1, n + 1)}) != 1:
            return
        u, v = edges[i]
        d = _DSU(n)
        d.p = list(dsu_parent)
        left[u] -= 1
        left[v] -= 1
        if d.find(u) != d.find(v):
            deg[u] += 1
            deg[v] += 1
            if (degree_ok is None or (degree_ok(u, deg[u]) and degree_ok(v, deg[v]))) \
                    and settled(u) and settled(v):
                d.union(u, v)
                chosen.append(i)
                yield from rec(i + 1, d.p, comps - 1)
                chosen.pop()
            deg[u] -= 1
            deg[v] -= 1
        if settled(u) and settled(v):
            yield from rec(i + 1, dsu_parent, comps)
        left[u] += 1
        left[v] += 1

    yield from rec(0, list(range(n + 1)), n)


def matrix_tree_count(G: Graph) -> int:
    """Kirchhoff's theorem with an exact rational determinant."""
    n = G.n
    if n <= 1:
        return 1
    L = [[Fraction(0)] * n for _ in range(n)]
    for u, v in G.edges:
        L[u - 1][u - 1] += 1
        L[v - 1][v - 1] += 1
        L[u - 1][v - 1] -= 1
        L[v - 1][u - 1] -= 1
    M = [row[1:] for row in L[1:]]
    size = n - 1
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if M[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, size):
            f = M[r][c] / M[c][c]
            if f:
                for j in range(c, size):
                    M[r][j] -= f * M[c][j]
    return int(det)


def solve_bruteforce(inst: Instance, cap: int = DEFAULT_CAP) -> SolveResult:
    t0 = time.perf_counter()
    _check_cap(inst.graph, cap)
    res = SolveResult("no", "oracle")
    prepared = screen(inst)
    if isinstance(prepared, EarlyReject):
        res.stats["screen"] = prepared.reason
    else:
        best = None
        allowed = [None] + [prepared.allowed(v) for v in prepared.graph.vertices]
        dmax = [0] + [max(s) for s in allowed[1:]]
        for tree in enumerate_spanning_trees(prepared.graph, cap, lambda v, d: d <= dmax[v], allowed):
            deg = Counter()
            for i in tree:
                u, v = prepared.graph.edges[i]
                deg[u] += 1
                deg[v] += 1
            if all(deg[v] in allowed[v] for v in prepared.graph.vertices):
                cost = sum(prepared.weight(i) for i in tree)
                if best is None or cost < best:
                    best = cost
                if not inst.weighted:
                    break
        if best is not None and (not inst.weighted or best <= inst.bound):
            res.answer = "yes"
        if inst.weighted and best is not None:
            res.min_cost = best
    res.stats["ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return res


@dataclass
class SolutionCounts:
    solutions: Counter   # (w1, w2) -> |S[w1, w2]|
    cuts: Counter        # (w1, w2) -> C[w1, w2]
    relaxed: int = 0


def count_cuts_and_solutions(inst: Instance, iso, cap: int = 6) -> SolutionCounts:
    """Exact |S| and C tables by enumeration of relaxed solutions and cuts.

    ``iso`` is a sequence of isolation weights, one per edge. Colourings are
    enumerated explicitly and checked against 2^{#components}.
    """
    G = inst.graph
    _check_cap(G, cap)
    n = G.n
    allowed = [None] + [inst.allowed(v) for v in G.vertices]
    S, C = Counter(), Counter()
    relaxed = 0
    for F in itertools.combinations(range(G.m), n - 1):
        deg = Counter()
        for i in F:
            u, v = G.edges[i]
            deg[u] += 1
            deg[v] += 1
        if any(deg[v] not in allowed[v] for v in G.vertices):
            continue
        relaxed += 1
        key = (sum(inst.weight(i) for i in F), sum(iso[i] for i in F))
        dsu = _DSU(n)
        for i in F:
            dsu.union(*G.edges[i])
        comps = len({dsu.find(v) for v in G.vertices})
        cuts = 0
        for col in itertools.product((0, 1), repeat=n):
            if all(col[G.edges[i][0] - 1] == col[G.edges[i][1] - 1] for i in F):
                cuts += 1
        if cuts != 2 ** comps:
            raise AssertionError("consistent cut count differs from 2^components")
        C[key] += cuts
        if comps == 1:
            S[key] += 1
    return SolutionCounts(S, C, relaxed)
