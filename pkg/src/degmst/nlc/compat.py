"""Exhaustive alpha-compatibility check for tiny fixed forests (test support)."""

from __future__ import annotations

import itertools

from .patterns import FixedForest, make_pattern

SIZE_GUARD = 16


def _vector_cost(v, gmax: int) -> int:
    return max(1, sum(-(-x // gmax) for x in v))


def minimal_fixed_forest(A, k: int, gmax: int = 2) -> FixedForest:
    """Fewest-vertex fixed forest with pattern A when every g is at most gmax.

    Compatibility only depends on the pattern, so this representative
    stands for every forest realising A.
    """
    labels, g, edges = [], [], []
    for v in A:
        base = len(labels)
        for i, x in enumerate(v):
            while x > 0:
                labels.append(i + 1)
                g.append(min(x, gmax))
                x -= gmax
        if len(labels) == base:
            labels.append(1)
            g.append(0)
        edges += [(t - 1, t) for t in range(base + 1, len(labels))]
    return FixedForest(k, tuple(labels), tuple(g), tuple(edges))


def probe_patterns(k: int, max_vertices: int = 6, gmax: int = 2) -> list:
    """Patterns of all fixed forests with at most max_vertices vertices and g <= gmax."""
    vecs = [v for v in itertools.product(range(max_vertices * gmax + 1), repeat=k)
            if _vector_cost(v, gmax) <= max_vertices]
    vecs.sort()
    out = [()]

    def rec(start, budget, acc):
        for t in range(start, len(vecs)):
            c = _vector_cost(vecs[t], gmax)
            if c <= budget:
                acc.append(vecs[t])
                out.append(make_pattern(acc))
                rec(t, budget - c, acc)
                acc.pop()

    rec(0, max_vertices, [])
    return out


def alpha_compatible(F1: FixedForest, F2: FixedForest, alpha) -> bool:
    """Is there a spanning tree of F1 (+)_alpha F2 containing E(F1) and E(F2)
    whose cross edges hit every vertex exactly g(v) times?"""
    n1, n2 = F1.size, F2.size
    if n1 == 0 or n2 == 0:
        # one side empty: the other must already be one finished tree
        F = F2 if n1 == 0 else F1
        return F.size > 0 and len(F.components()) == 1 and not any(F.g)
    if n1 + n2 > SIZE_GUARD:
        raise ValueError(f"forests too large for exhaustive search ({n1 + n2} > {SIZE_GUARD})")
    need = list(F1.g) + list(F2.g)
    c1, c2 = len(F1.components()), len(F2.components())
    s1, s2 = sum(F1.g), sum(F2.g)
    # every cross edge joins two components and uses one unit on each side
    if s1 != s2 or s1 != c1 + c2 - 1:
        return False
    parent = list(range(n1 + n2))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in F1.edges:
        parent[find(a)] = find(b)
    for a, b in F2.edges:
        parent[find(a + n1)] = find(b + n1)
    partners = [[n1 + y for y in range(n2) if (F1.labels[x], F2.labels[y]) in alpha] for x in range(n1)]

    def place(x, start):
        if x == n1:
            return all(need[y] == 0 for y in range(n1, n1 + n2))
        if need[x] == 0:
            return place(x + 1, 0)
        cands = partners[x]
        for idx in range(start, len(cands)):
            y = cands[idx]
            if need[y] == 0:
                continue
            rx, ry = find(x), find(y)
            if rx == ry:
                continue
            parent[rx] = ry
            need[x] -= 1
            need[y] -= 1
            if place(x, idx + 1):
                return True
            need[x] += 1
            need[y] += 1
            parent[rx] = rx
        return False

    return place(0, 0)


def forests_equivalent(R1, R2, probes, alpha_sets) -> list:
    """Counterexamples to: some member of R1 is compatible iff some of R2 is.

    Probes are the left operands; members of R1/R2 are right operands.
    """
    bad = []
    for alpha in alpha_sets:
        for P in probes:
            a = any(alpha_compatible(P, F, alpha) for F in R1)
            b = any(alpha_compatible(P, F, alpha) for F in R2)
            if a != b:
                bad.append((alpha, P, a, b))
    return bad
