"""Tree/path decompositions, nice decompositions, arrangements, NLC expressions."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Optional

from .core import Graph


class DecompositionError(ValueError):
    pass


# --------------------------------------------------------------------------
# tree decompositions


@dataclass(frozen=True)
class TreeDecomposition:
    bags: dict          # node id -> frozenset of vertices
    tree_edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "bags", {int(k): frozenset(v) for k, v in self.bags.items()})
        object.__setattr__(self, "tree_edges", tuple((int(a), int(b)) for a, b in self.tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def neighbours(self) -> dict:
        nb = {x: [] for x in self.bags}
        for a, b in self.tree_edges:
            nb.setdefault(a, []).append(b)
            nb.setdefault(b, []).append(a)
        return nb

    def is_path(self) -> bool:
        return all(len(v) <= 2 for v in self.neighbours().values())


@dataclass(frozen=True)
class DecompositionCheck:
    violations: list
    width: int

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_tree_decomposition(G: Graph, td: TreeDecomposition) -> DecompositionCheck:
    out = []
    nb = td.neighbours()
    nodes = set(td.bags)
    if not nodes:
        out.append("decomposition has no bags")
    if any(a not in nodes or b not in nodes for a, b in td.tree_edges):
        out.append("tree edge references unknown bag")
    elif nodes:
        # tree: connected with |nodes|-1 edges
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodes) or len(set(map(frozenset, td.tree_edges))) != len(nodes) - 1 \
                or len(td.tree_edges) != len(nodes) - 1:
            out.append("decomposition is not a tree")
    for bag in td.bags.values():
        for v in bag:
            if not 1 <= v <= G.n:
                out.append(f"bag vertex {v} out of range")
    holders = defaultdict(set)
    for x, bag in td.bags.items():
        for v in bag:
            holders[v].add(x)
    for v in G.vertices:
        if not holders[v]:
            out.append(f"vertex {v} not covered")
    for u, v in G.edges:
        if not holders[u] & holders[v]:
            out.append(f"edge ({u},{v}) not covered")
    if "decomposition is not a tree" not in out:
        for v in G.vertices:
            hs = holders[v]
            if not hs:
                continue
            start = next(iter(hs))
            seen = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in nb[x]:
                    if y in hs and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != hs:
                out.append(f"vertex {v} not connected")
    return DecompositionCheck(out, td.width)


def trivial_decomposition(G: Graph) -> TreeDecomposition:
    return TreeDecomposition({1: frozenset(G.vertices)}, ())


def path_decomposition(bags) -> TreeDecomposition:
    """Path-shaped decomposition from a bag sequence."""
    bags = list(bags)
    return TreeDecomposition({i + 1: frozenset(b) for i, b in enumerate(bags)},
                             tuple((i, i + 1) for i in range(1, len(bags))))


# --------------------------------------------------------------------------
# nice decompositions

LEAF, INTRO, INTRO_EDGE, FORGET, JOIN = "leaf", "introduce", "introduce-edge", "forget", "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset
    children: tuple = ()
    vertex: Optional[int] = None
    edge: Optional[tuple] = None
    tag: Optional[int] = None   # arrangement position i for the bag B_i^{n_i-1}


@dataclass(frozen=True)
class NiceDecomposition:
    """Nodes in bottom-up order; the last node is the root."""

    nodes: tuple

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def is_path(self) -> bool:
        return all(nd.kind != JOIN for nd in self.nodes)

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        bags = {i + 1: nd.bag for i, nd in enumerate(self.nodes)}
        edges = tuple((c + 1, i + 1) for i, nd in enumerate(self.nodes) for c in nd.children)
        return TreeDecomposition(bags, edges)


class _Builder:
    def __init__(self):
        self.nodes = []

    def add(self, kind, bag, children=(), **kw) -> int:
        self.nodes.append(NiceNode(kind, frozenset(bag), tuple(children), **kw))
        return len(self.nodes) - 1

    def bag(self, i) -> frozenset:
        return self.nodes[i].bag

    def leaf(self) -> int:
        return self.add(LEAF, ())

    def introduce(self, i, v, **kw) -> int:
        return self.add(INTRO, self.bag(i) | {v}, (i,), vertex=v, **kw)

    def forget(self, i, v) -> int:
        return self.add(FORGET, self.bag(i) - {v}, (i,), vertex=v)

    def edge(self, i, e, **kw) -> int:
        return self.add(INTRO_EDGE, self.bag(i), (i,), edge=e, **kw)

    def morph(self, i, target) -> int:
        """Forget then introduce (sorted) until the bag equals target."""
        for v in sorted(self.bag(i) - target):
            i = self.forget(i, v)
        for v in sorted(target - self.bag(i)):
            i = self.introduce(i, v)
        return i


def make_nice(G: Graph, td: TreeDecomposition) -> NiceDecomposition:
    check = validate_tree_decomposition(G, td)
    if not check.ok:
        raise DecompositionError("; ".join(check.violations))
    nb = td.neighbours()
    # root at an end of a path so that path input stays join free
    ends = sorted(x for x in td.bags if len(nb[x]) <= 1)
    root = ends[0] if ends else min(td.bags)
    parent = {root: None}
    order = [root]
    for x in order:
        for y in sorted(nb[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    depth = {root: 0}
    for x in order[1:]:
        depth[x] = depth[parent[x]] + 1
    # each edge is introduced at the shallowest bag holding both ends
    home = defaultdict(list)
    for e in G.edges:
        u, v = e
        best = min((x for x in td.bags if u in td.bags[x] and v in td.bags[x]),
                   key=lambda x: (depth[x], x))
        home[best].append(e)

    b = _Builder()
    built = {}
    for x in reversed(order):
        bag = td.bags[x]
        kids = [y for y in sorted(nb[x]) if parent.get(y) == x]
        if not kids:
            cur = b.morph(b.leaf(), bag)
        else:
            chains = [b.morph(built.pop(y), bag) for y in kids]
            cur = chains[0]
            for other in chains[1:]:
                cur = b.add(JOIN, bag, (cur, other))
        for e in sorted(home[x]):
            cur = b.edge(cur, e)
        built[x] = cur
    b.morph(built[root], frozenset())
    return NiceDecomposition(tuple(b.nodes))


def validate_nice(G: Graph, nice: NiceDecomposition) -> list:
    """Check the nice-node grammar; returns violations."""
    out = []
    used = set()
    introduced = defaultdict(int)
    for i, nd in enumerate(nice.nodes):
        if any(c >= i for c in nd.children):
            out.append(f"node {i}: child after parent")
            continue
        kids = [nice.nodes[c] for c in nd.children]
        used.update(nd.children)
        if nd.kind == LEAF:
            if kids or nd.bag:
                out.append(f"node {i}: leaf must be empty and childless")
        elif nd.kind == INTRO:
            if len(kids) != 1 or nd.vertex in kids[0].bag or nd.bag != kids[0].bag | {nd.vertex}:
                out.append(f"node {i}: bad introduce")
        elif nd.kind == FORGET:
            if len(kids) != 1 or nd.vertex not in kids[0].bag or nd.bag != kids[0].bag - {nd.vertex}:
                out.append(f"node {i}: bad forget")
        elif nd.kind == INTRO_EDGE:
            if len(kids) != 1 or nd.bag != kids[0].bag or not set(nd.edge) <= nd.bag:
                out.append(f"node {i}: bad introduce-edge")
            introduced[tuple(nd.edge)] += 1
        elif nd.kind == JOIN:
            if len(kids) != 2 or any(k.bag != nd.bag for k in kids):
                out.append(f"node {i}: bad join")
        else:
            out.append(f"node {i}: unknown kind {nd.kind}")
    if nice.nodes and nice.nodes[-1].bag:
        out.append("root bag not empty")
    if len(used) != len(nice.nodes) - 1:
        out.append("nodes do not form a single rooted tree")
    for e in G.edges:
        if introduced[e] != 1:
            out.append(f"edge {e} introduced {introduced[e]} times")
    for e in introduced:
        if e not in G.edge_index:
            out.append(f"edge {e} not in graph")
    return out


def introduced_edges_below(nice: NiceDecomposition) -> list:
    """E_x for every node: the edges introduced in its subtree."""
    out = []
    for nd in nice.nodes:
        s = set()
        for c in nd.children:
            s |= out[c]
        if nd.kind == INTRO_EDGE:
            s.add(nd.edge)
        out.append(s)
    return out


# --------------------------------------------------------------------------
# linear arrangements


@dataclass(frozen=True)
class LinearArrangement:
    order: tuple

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))

    def check(self, G: Graph) -> list:
        if sorted(self.order) != list(G.vertices):
            return ["arrangement is not a permutation of the vertices"]
        return []

    def cut_sizes(self, G: Graph) -> list:
        pos = {v: i for i, v in enumerate(self.order)}
        cuts = [0] * len(self.order)
        for u, v in G.edges:
            a, b = sorted((pos[u], pos[v]))
            for i in range(a, b):
                cuts[i] += 1
        return cuts

    def cutwidth(self, G: Graph) -> int:
        return max(self.cut_sizes(G), default=0)


def arrangement_to_nice_path(G: Graph, arr: LinearArrangement) -> NiceDecomposition:
    problems = arr.check(G)
    if problems:
        raise DecompositionError(problems[0])
    order = arr.order
    pos = {v: i for i, v in enumerate(order)}
    b = _Builder()
    cur = b.leaf()
    prev_right = set()
    for i, v in enumerate(order):
        later = sorted(u for u in G.adjacency[v] if pos[u] > i)
        # R_i: right endpoints of edges crossing the cut after position i
        right = set(prev_right) - {v}
        right.update(later)
        fresh = sorted(right - prev_right)
        steps = []
        if v not in prev_right:
            steps.append(("v", v))
        steps += [("v", u) for u in fresh]
        steps += [("e", (min(v, u), max(v, u))) for u in later]
        if not steps:
            # the bag before the forget is already B'_i
            b.nodes[cur] = replace(b.nodes[cur], tag=i + 1)
        for j, (kind, obj) in enumerate(steps):
            tag = i + 1 if j == len(steps) - 1 else None
            if kind == "v":
                cur = b.introduce(cur, obj, tag=tag)
            else:
                cur = b.edge(cur, obj, tag=tag)
        cur = b.forget(cur, v)
        prev_right = right
    return NiceDecomposition(tuple(b.nodes))


def arrangement_bags(G: Graph, arr: LinearArrangement) -> list:
    """The bags B'_i = {v_i} | R_i as a plain path decomposition."""
    pos = {v: i for i, v in enumerate(arr.order)}
    bags = []
    for i, v in enumerate(arr.order):
        right = {u for x in arr.order[: i + 1] for u in G.adjacency[x] if pos[u] > i}
        bags.append(frozenset({v} | right))
    return bags


# --------------------------------------------------------------------------
# NLC expressions


class NlcError(ValueError):
    pass


@dataclass(frozen=True)
class NlcLeaf:
    label: int
    vertex: int


@dataclass(frozen=True)
class NlcJoin:
    left: int
    right: int
    alpha: frozenset          # pairs (i, j): left label i, right label j
    beta: tuple               # beta[i-1] = image of label i


@dataclass(frozen=True)
class NlcExpression:
    k: int
    nodes: dict               # id -> NlcLeaf | NlcJoin
    root: int

    def postorder(self) -> list:
        out = []
        seen = set()
        stack = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            if x in seen:
                raise NlcError(f"node {x} reached twice")
            if x not in self.nodes:
                raise NlcError(f"unknown node {x}")
            seen.add(x)
            stack.append((x, True))
            nd = self.nodes[x]
            if isinstance(nd, NlcJoin):
                stack.append((nd.right, False))
                stack.append((nd.left, False))
        return out

    def leaves(self) -> list:
        return [x for x in self.postorder() if isinstance(self.nodes[x], NlcLeaf)]


@dataclass
class LabeledGraph:
    labels: dict                          # vertex -> label
    edges: set = field(default_factory=set)


def eval_nlc(expr: NlcExpression) -> dict:
    k = expr.k
    out = {}
    for x in expr.postorder():
        nd = expr.nodes[x]
        if isinstance(nd, NlcLeaf):
            if not 1 <= nd.label <= k:
                raise NlcError(f"leaf {x}: label {nd.label} outside [1,{k}]")
            out[x] = LabeledGraph({nd.vertex: nd.label}, set())
            continue
        if len(nd.beta) != k or any(not 1 <= t <= k for t in nd.beta):
            raise NlcError(f"join {x}: relabelling must map [1,{k}] into itself")
        if any(not (1 <= i <= k and 1 <= j <= k) for i, j in nd.alpha):
            raise NlcError(f"join {x}: alpha pair outside [1,{k}]^2")
        g1, g2 = out[nd.left], out[nd.right]
        if set(g1.labels) & set(g2.labels):
            raise NlcError(f"join {x}: operands share vertices")
        edges = g1.edges | g2.edges
        for u, lu in g1.labels.items():
            for v, lv in g2.labels.items():
                if (lu, lv) in nd.alpha:
                    edges.add((min(u, v), max(u, v)))
        labels = {v: nd.beta[l - 1] for v, l in {**g1.labels, **g2.labels}.items()}
        out[x] = LabeledGraph(labels, edges)
    return out


def nlc_graph(expr: NlcExpression) -> Graph:
    g = eval_nlc(expr)[expr.root]
    return Graph(len(g.labels), tuple(sorted(g.edges)))


def check_nlc_matches(expr: NlcExpression, G: Graph) -> list:
    try:
        g = eval_nlc(expr)[expr.root]
    except NlcError as exc:
        return [str(exc)]
    out = []
    if sorted(g.labels) != list(G.vertices):
        out.append("expression vertices differ from the graph")
    if g.edges != set(G.edges):
        out.append("expression edges differ from the graph")
    return out
