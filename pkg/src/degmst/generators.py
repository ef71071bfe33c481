"""Synthetic instances that come with a width witness."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .core import DegreeSpec, Graph, Instance
from .decomp import (LinearArrangement, NlcExpression, NlcJoin, NlcLeaf, TreeDecomposition,
                     arrangement_bags, eval_nlc, path_decomposition)

FAMILIES = ("random-pkt", "random-arr", "random-nlc", "path", "cycle", "grid", "star")


@dataclass
class Generated:
    family: str
    graph: Graph
    td: Optional[TreeDecomposition] = None
    arr: Optional[LinearArrangement] = None
    expr: Optional[NlcExpression] = None


def _relabel(n, edges, rng):
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    mp = {i + 1: perm[i] for i in range(n)}
    return mp, [(mp[u], mp[v]) for u, v in edges]


def random_pkt(n: int, k: int, rng: random.Random, shape: str = "tree", keep: float = 0.6) -> Generated:
    """Random partial k-tree (or partial k-path with shape='path') with its decomposition."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    base = list(range(1, min(n, k + 1) + 1))
    edges = set()
    # spanning path inside the first clique keeps things connected
    for a, b in zip(base, base[1:]):
        edges.add((a, b))
    for a, b in itertools.combinations(base, 2):
        if rng.random() < keep:
            edges.add((a, b))
    bags = [frozenset(base)]
    tree = []
    for v in range(len(base) + 1, n + 1):
        host = len(bags) - 1 if shape == "path" else rng.randrange(len(bags))
        hb = sorted(bags[host])
        drop = rng.choice(hb) if len(hb) > k else None
        clique = [x for x in hb if x != drop]
        anchor = rng.choice(clique)
        edges.add((anchor, v))
        for x in clique:
            if x != anchor and rng.random() < keep:
                edges.add((min(x, v), max(x, v)))
        bags.append(frozenset(clique + [v]))
        tree.append((host + 1, len(bags)))
    mp, e2 = _relabel(n, sorted(edges), rng)
    td = TreeDecomposition({i + 1: frozenset(mp[x] for x in b) for i, b in enumerate(bags)}, tuple(tree))
    return Generated("random-pkt", Graph(n, tuple(sorted((min(a, b), max(a, b)) for a, b in e2))), td=td)


def random_arr(n: int, c: int, rng: random.Random, density: float = 0.5) -> Generated:
    """Graph grown along a random order while every prefix cut stays <= c."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    cuts = [0] * n
    edges = []
    for i in range(1, n):
        cands = [i - 1] + [j for j in range(i - 1) if rng.random() < density]
        for j in cands:
            if max(cuts[j:i]) < c:
                for t in range(j, i):
                    cuts[t] += 1
                edges.append(tuple(sorted((order[j], order[i]))))
    G = Graph(n, tuple(sorted(edges)))
    return Generated("random-arr", G, arr=LinearArrangement(tuple(order)),
                     td=path_decomposition(arrangement_bags(G, LinearArrangement(tuple(order)))))


def random_nlc(k: int, leaves: int, rng: random.Random) -> Generated:
    """Random expression whose every join adds at least one cross edge (so G is connected)."""
    parts = []
    nodes = {}
    nid = 0
    for v in range(1, leaves + 1):
        nid += 1
        lab = rng.randint(1, k)
        nodes[nid] = NlcLeaf(lab, v)
        parts.append((nid, {v: lab}))
    while len(parts) > 1:
        i, j = rng.sample(range(len(parts)), 2)
        (l, labs1), (r, labs2) = parts[i], parts[j]
        present1, present2 = sorted(set(labs1.values())), sorted(set(labs2.values()))
        alpha = {(a, b) for a in range(1, k + 1) for b in range(1, k + 1) if rng.random() < 0.3}
        alpha.add((rng.choice(present1), rng.choice(present2)))
        beta = tuple(rng.randint(1, k) for _ in range(k))
        nid += 1
        nodes[nid] = NlcJoin(l, r, frozenset(alpha), beta)
        labs = {v: beta[x - 1] for v, x in {**labs1, **labs2}.items()}
        parts = [p for t, p in enumerate(parts) if t not in (i, j)] + [(nid, labs)]
    expr = NlcExpression(k, nodes, parts[0][0])
    g = eval_nlc(expr)[expr.root]
    return Generated("random-nlc", Graph(leaves, tuple(sorted(g.edges))), expr=expr)


def path_graph(n: int) -> Generated:
    G = Graph(n, tuple((i, i + 1) for i in range(1, n)))
    arr = LinearArrangement(tuple(range(1, n + 1)))
    return Generated("path", G, td=path_decomposition(arrangement_bags(G, arr)), arr=arr)


def cycle_graph(n: int) -> Generated:
    edges = [(i, i + 1) for i in range(1, n)] + ([(1, n)] if n >= 3 else [])
    G = Graph(n, tuple(edges))
    arr = LinearArrangement(tuple(range(1, n + 1)))
    return Generated("cycle", G, td=path_decomposition(arrangement_bags(G, arr)), arr=arr)


def grid_graph(rows: int, cols: int) -> Generated:
    vid = lambda r, c: r * cols + c + 1
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    G = Graph(rows * cols, tuple(edges))
    arr = LinearArrangement(tuple(range(1, rows * cols + 1)))
    return Generated("grid", G, td=path_decomposition(arrangement_bags(G, arr)), arr=arr)


def star_graph(leaves: int) -> Generated:
    G = Graph(leaves + 1, tuple((1, i) for i in range(2, leaves + 2)))
    arr = LinearArrangement(tuple(range(1, leaves + 2)))
    nodes = {1: NlcLeaf(1, 1)}
    cur = 1
    for v in range(2, leaves + 2):
        nodes[2 * v - 2] = NlcLeaf(2, v)
        nodes[2 * v - 1] = NlcJoin(cur, 2 * v - 2, frozenset({(1, 2)}), (1, 2))
        cur = 2 * v - 1
    expr = NlcExpression(2, nodes, cur)
    return Generated("star", G, td=path_decomposition(arrangement_bags(G, arr)), arr=arr, expr=expr)


# --------------------------------------------------------------------------
# NLC expressions for arbitrary small graphs


def nlc_expression_for(G: Graph, k: int) -> Optional[NlcExpression]:
    """An expression with at most k labels, or None if none exists.

    Exact search over vertex bipartitions (about 3^n work), meant for n <= 8.
    A vertex set S can only share a label between vertices that look alike
    from outside S, so the labels S needs at its root are its classes of
    equal outside-neighbourhood; a split S = S1 + S2 fits in k labels when,
    summed over the classes X of S, max(#classes of S1 in X, #classes of S2
    in X) <= k, because equal label numbers across the two sides must be
    sent to the same class by the shared relabelling.
    """
    V = frozenset(G.vertices)
    adj = {v: frozenset(G.adjacency[v]) for v in V}

    @lru_cache(maxsize=None)
    def classes(S):
        groups = {}
        for v in sorted(S):
            groups.setdefault(adj[v] - S, []).append(v)
        return tuple(frozenset(g) for g in groups.values())

    def cost(S, S1, S2):
        total = 0
        c1, c2 = classes(S1), classes(S2)
        for X in classes(S):
            total += max(sum(1 for Y in c1 if Y <= X), sum(1 for Y in c2 if Y <= X))
        return total

    @lru_cache(maxsize=None)
    def split(S):
        if len(S) == 1:
            return ()
        items = sorted(S)
        first, rest = items[0], items[1:]
        for mask in range(0, 2 ** len(rest) - 1):
            S1 = frozenset([first] + [rest[i] for i in range(len(rest)) if mask >> i & 1])
            S2 = S - S1
            if cost(S, S1, S2) <= k and split(S1) is not None and split(S2) is not None:
                return (S1, S2)
        return None

    if not V or split(V) is None:
        return None
    nodes = {}
    counter = [0]

    def build(S, out_label):
        counter[0] += 1
        me = counter[0]
        if len(S) == 1:
            (v,) = S
            nodes[me] = NlcLeaf(out_label[classes(S)[0]], v)
            return me
        S1, S2 = split(S)
        lab1, lab2 = {}, {}
        beta = [1] * k
        nxt = 1
        alpha = set()
        for X in classes(S):
            c1 = [Y for Y in classes(S1) if Y <= X]
            c2 = [Y for Y in classes(S2) if Y <= X]
            for t in range(max(len(c1), len(c2))):
                beta[nxt - 1] = out_label[X]
                if t < len(c1):
                    lab1[c1[t]] = nxt
                if t < len(c2):
                    lab2[c2[t]] = nxt
                nxt += 1
        for Y1, l1 in lab1.items():
            for Y2, l2 in lab2.items():
                if adj[next(iter(Y1))] & Y2:
                    alpha.add((l1, l2))
        left = build(S1, lab1)
        right = build(S2, lab2)
        nodes[me] = NlcJoin(left, right, frozenset(alpha), tuple(beta))
        return me

    root = build(V, {V: 1})
    return NlcExpression(k, nodes, root)


def connected_graphs(max_n: int):
    """All connected graphs on 1..max_n vertices up to isomorphism (max_n <= 7)."""
    import networkx as nx

    for g in nx.graph_atlas_g():
        if 1 <= g.number_of_nodes() <= max_n and nx.is_connected(g):
            yield Graph(g.number_of_nodes(), tuple(sorted((u + 1, v + 1) for u, v in g.edges())))


# --------------------------------------------------------------------------
# degree specs and weights

POLICIES = ("mixed", "set", "bounded", "specified", "tree-specified", "bounded2")


def random_tree_degrees(G: Graph, rng: random.Random) -> list:
    """Degrees of a random spanning tree (random-order Kruskal)."""
    parent = list(range(G.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deg = [0] * (G.n + 1)
    edges = list(G.edges)
    rng.shuffle(edges)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            deg[u] += 1
            deg[v] += 1
    return deg[1:]


def random_degrees(G: Graph, policy: str, rng: random.Random, rmax: int = 3) -> DegreeSpec:
    n = G.n
    if policy == "mixed":
        policy = rng.choice(("set", "bounded", "specified", "tree-specified"))
    tree = random_tree_degrees(G, rng) if n > 1 else [1]
    if policy == "bounded2":
        return DegreeSpec.bounded([2] * n)
    if policy == "bounded":
        return DegreeSpec.bounded([max(1, min(rmax, t + rng.choice((-1, 0, 0, 1)))) for t in tree])
    if policy == "specified":
        return DegreeSpec.specified([max(1, t + rng.choice((-1, 0, 0, 0, 1))) for t in tree])
    if policy == "tree-specified":
        return DegreeSpec.specified([max(1, t) for t in tree])
    if policy == "set":
        sets = []
        for t in tree:
            s = {x for x in range(1, rmax + 1) if rng.random() < 0.4}
            if rng.random() < 0.7:
                s.add(max(1, min(t, rmax)))
            sets.append(sorted(s or {1}))
        return DegreeSpec.from_sets(sets)
    raise ValueError(f"unknown degree policy {policy!r}")


def make_instance(G: Graph, rng: random.Random, policy: str = "mixed", max_weight: int = 0,
                  bound: Optional[int] = None, rmax: int = 3) -> Instance:
    D = random_degrees(G, policy, rng, rmax)
    if max_weight <= 0 and bound is None:
        return Instance(G, D)
    W = tuple(rng.randint(0, max_weight) for _ in G.edges)
    if bound is None:
        bound = rng.randint(0, max(0, (G.n - 1) * max_weight))
    return Instance(G, D, W, bound)


def generate(family: str, rng: random.Random, n: int = 8, k: int = 2, leaves: int = None,
             shape: str = "tree", keep: float = 0.6) -> Generated:
    if family == "random-pkt":
        return random_pkt(n, k, rng, shape, keep)
    if family == "random-arr":
        return random_arr(n, k, rng)
    if family == "random-nlc":
        return random_nlc(k, leaves or n, rng)
    if family == "path":
        return path_graph(n)
    if family == "cycle":
        return cycle_graph(n)
    if family == "grid":
        cols = max(1, k)
        return grid_graph(max(1, n // cols), cols)
    if family == "star":
        return star_graph(max(1, n - 1))
    raise ValueError(f"unknown family {family!r}")
