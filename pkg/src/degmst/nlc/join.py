"""Cross-edge enumeration for a join of two patterns.

Both enumerators return the set of patterns repr(F_A1 + F_A2 + E', g - deg_E')
over admissible E' (edges only on alpha label pairs, left label first;
usage within requirements; acyclic; at most one zero vector), before the
relabelling and reduction steps.

``join_structured`` works at component level: non-unit components
("heavy") form a forest among themselves with at most one edge per pair;
unit components of one (side, label) are interchangeable so only their
counts per attachment point matter; at most one unit-unit edge exists since
it closes a finished component. ``join_naive`` enumerates edge subsets of
the canonical forests directly and serves as the test oracle.
"""

from __future__ import annotations

from functools import lru_cache

from .patterns import FixedForest, canonical_fixed_forest, is_unit, is_zero, make_pattern, pattern_of


@lru_cache(maxsize=200_000)
def join_structured(A1: tuple, A2: tuple, alpha: frozenset, live_only: bool = False) -> frozenset:
    """With live_only, patterns holding a zero vector next to other vectors are skipped."""
    k = len((A1 or A2)[0]) if (A1 or A2) else 0
    units_k = [tuple(1 if t == lab else 0 for t in range(k)) for lab in range(k)]
    zeros = sum(1 for v in A1 if is_zero(v)) + sum(1 for v in A2 if is_zero(v))
    if zeros > 1:
        return frozenset()
    heavy, side = [], []
    units = [[0] * k, [0] * k]
    for s, A in ((0, A1), (1, A2)):
        for v in A:
            if is_zero(v):
                continue
            if is_unit(v):
                units[s][v.index(1)] += 1
            else:
                heavy.append(list(v))
                side.append(s)
    h = len(heavy)
    pairs_lr = sorted(alpha)
    pairs = [(x, y) for x in range(h) for y in range(h) if side[x] == 0 and side[y] == 1]
    out = set()
    parent = list(range(h))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    def finish():
        # distribute units over heavy components of the other side
        slots = []
        for s in (0, 1):
            for lab in range(k):
                if not units[s][lab]:
                    continue
                for y in range(h):
                    if side[y] == s:
                        continue
                    for (i, j) in pairs_lr:
                        mine, theirs = (i, j) if s == 0 else (j, i)
                        if mine == lab + 1:
                            slots.append((s, lab, y, theirs - 1))
        left = [list(units[0]), list(units[1])]
        _distribute(slots, 0, left)

    def _distribute(slots, pos, left):
        if pos == len(slots):
            _close(left)
            return
        s, lab, y, j = slots[pos]
        top = min(left[s][lab], heavy[y][j])
        for cnt in range(top + 1):
            left[s][lab] -= cnt
            heavy[y][j] -= cnt
            _distribute(slots, pos + 1, left)
            left[s][lab] += cnt
            heavy[y][j] += cnt

    def _close(left):
        groups = {}
        for x in range(h):
            g = groups.setdefault(find(x), [0] * k)
            for t in range(k):
                g[t] += heavy[x][t]
        merged = [tuple(g) for g in groups.values()]
        nz = zeros + sum(1 for g in merged if is_zero(g))
        if nz > 1:
            return
        rest = len(merged) + zeros - nz + sum(left[0]) + sum(left[1])

        def emit(extra_zero):
            vecs = merged + [(0,) * k] * (zeros + extra_zero)
            for s in (0, 1):
                for lab in range(k):
                    if left[s][lab]:
                        vecs += [units_k[lab]] * left[s][lab]
            out.add(make_pattern(vecs))

        if not (live_only and nz and rest):
            emit(0)
        if nz == 0 and not (live_only and rest > 2):
            for (i, j) in pairs_lr:
                if left[0][i - 1] and left[1][j - 1]:
                    left[0][i - 1] -= 1
                    left[1][j - 1] -= 1
                    emit(1)
                    left[0][i - 1] += 1
                    left[1][j - 1] += 1

    def grow(pos):
        if pos == len(pairs):
            finish()
            return
        grow(pos + 1)
        x, y = pairs[pos]
        rx, ry = find(x), find(y)
        if rx == ry:
            return
        for (i, j) in pairs_lr:
            if heavy[x][i - 1] >= 1 and heavy[y][j - 1] >= 1:
                heavy[x][i - 1] -= 1
                heavy[y][j - 1] -= 1
                parent[rx] = ry
                grow(pos + 1)
                parent[rx] = rx
                heavy[x][i - 1] += 1
                heavy[y][j - 1] += 1

    grow(0)
    return frozenset(out)


def join_naive(A1: tuple, A2: tuple, alpha: frozenset) -> frozenset:
    F1, F2 = canonical_fixed_forest(A1), canonical_fixed_forest(A2)
    k = F1.k or F2.k
    n1 = F1.size
    labels = F1.labels + F2.labels
    g = list(F1.g + F2.g)
    base_edges = list(F1.edges) + [(a + n1, b + n1) for a, b in F2.edges]
    cross = [(x, n1 + y) for x in range(n1) for y in range(F2.size)
             if (F1.labels[x], F2.labels[y]) in alpha]
    parent = list(range(len(labels)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in base_edges:
        parent[find(a)] = find(b)
    out = set()
    chosen = []

    def rec(pos):
        if pos == len(cross):
            F = FixedForest(k, labels, tuple(g), tuple(base_edges + chosen))
            P = pattern_of(F)
            if sum(1 for v in P if is_zero(v)) <= 1:
                out.add(P)
            return
        rec(pos + 1)
        x, y = cross[pos]
        if g[x] >= 1 and g[y] >= 1:
            rx, ry = find(x), find(y)
            if rx != ry:
                g[x] -= 1
                g[y] -= 1
                parent[rx] = ry
                chosen.append((x, y))
                rec(pos + 1)
                chosen.pop()
                parent[rx] = rx
                g[x] += 1
                g[y] += 1

    rec(0)
    return frozenset(out)
