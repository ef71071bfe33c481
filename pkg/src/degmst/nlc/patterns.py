"""Patterns (multisets of k-vectors), fixed forests and the basic operations.

A pattern is stored canonically as a sorted tuple of vector tuples; equal
vectors simply repeat. Operations that have to tell equal copies apart work
on positional lists instead and canonicalise at the end.
"""

from __future__ import annotations

from dataclasses import dataclass

Vec = tuple
Pattern = tuple


def make_pattern(vectors) -> Pattern:
    return tuple(sorted(tuple(v) for v in vectors))


def zero(k: int) -> Vec:
    return (0,) * k


def unit(k: int, i: int) -> Vec:
    """e_i with 1-based i."""
    return tuple(1 if j == i - 1 else 0 for j in range(k))


def is_zero(v: Vec) -> bool:
    return not any(v)


def is_unit(v: Vec) -> bool:
    return sum(v) == 1


def is_nice(A: Pattern) -> bool:
    if sum(1 for v in A if is_zero(v)) > 1:
        return False
    k = len(A[0]) if A else 0
    for i in range(k):
        if sum(1 for v in A if v[i] >= 1 and not is_unit(v)) > 1:
            return False
    return True


def relabel(beta, A: Pattern) -> Pattern:
    """rho_beta: entry i of the image sums the entries over beta^{-1}(i)."""
    k = len(beta)
    out = []
    for v in A:
        w = [0] * k
        for j, x in enumerate(v):
            w[beta[j] - 1] += x
        out.append(tuple(w))
    return make_pattern(out)


def _check_pi(i, v, u):
    if v[i - 1] < 1 or u[i - 1] < 1:
        raise ValueError(f"both vectors need a positive entry at index {i}")


def pi1(i: int, v: Vec, u: Vec):
    _check_pi(i, v, u)
    k = len(v)
    e = unit(k, i)
    return tuple(a + b - c for a, b, c in zip(v, u, e)), e


def pi2(i: int, v: Vec, u: Vec):
    _check_pi(i, v, u)
    ui = u[i - 1]
    v2 = tuple(a + (ui if j == i - 1 else 0) for j, a in enumerate(v))
    u2 = tuple(0 if j == i - 1 else b for j, b in enumerate(u))
    return v2, u2


def pi_pattern(which: int, A: Pattern, pv: int, pu: int, i: int) -> Pattern:
    """Apply pi1/pi2 to the members at positions pv != pu of A."""
    if pv == pu:
        raise ValueError("pi needs two distinct members")
    f = pi1 if which == 1 else pi2
    v2, u2 = f(i, A[pv], A[pu])
    rest = [x for p, x in enumerate(A) if p not in (pv, pu)]
    return make_pattern(rest + [v2, u2])


# --------------------------------------------------------------------------
# fixed forests


@dataclass(frozen=True)
class FixedForest:
    """Labelled forest with requirements; vertices are 0..len(labels)-1."""

    k: int
    labels: tuple
    g: tuple
    edges: tuple = ()

    @property
    def size(self) -> int:
        return len(self.labels)

    def components(self) -> list:
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ValueError("fixed forest contains a cycle")
            parent[ra] = rb
        comps = {}
        for x in range(self.size):
            comps.setdefault(find(x), []).append(x)
        return list(comps.values())


def canonical_fixed_forest(A: Pattern) -> FixedForest:
    if not A:
        return FixedForest(0, (), (), ())
    k = len(A[0])
    labels, g, edges = [], [], []
    for v in A:
        base = len(labels)
        for i in range(k):
            labels.append(i + 1)
            g.append(v[i])
            if i:
                edges.append((base + i - 1, base + i))
    return FixedForest(k, tuple(labels), tuple(g), tuple(edges))


def pattern_of(F: FixedForest) -> Pattern:
    out = []
    for comp in F.components():
        v = [0] * F.k
        for x in comp:
            v[F.labels[x] - 1] += F.g[x]
        out.append(tuple(v))
    return make_pattern(out)
