"""Graph and instance model, problem variants, reductions and cheap screens."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional

log = logging.getLogger(__name__)

VARIANTS = ("set", "bounded", "specified")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n.

    The constructor does not police the invariants; ``validate_instance``
    reports them so that malformed input can be described instead of crashing.
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(_norm(e) for e in self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            if u in adj and v in adj and u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {1}
        stack = [1]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n


def _norm(e) -> tuple:
    u, v = int(e[0]), int(e[1])
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class DegreeSpec:
    """Per-vertex degree data.

    ``values[v-1]`` holds the sorted listed integers of vertex v: the full set
    for the set variant, a single bound or a single exact degree otherwise.
    """

    variant: str
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(tuple(sorted(set(int(x) for x in vs))) for vs in self.values))

    @classmethod
    def from_sets(cls, sets) -> "DegreeSpec":
        return cls("set", tuple(tuple(s) for s in sets))

    @classmethod
    def bounded(cls, bounds) -> "DegreeSpec":
        return cls("bounded", tuple((b,) for b in bounds))

    @classmethod
    def specified(cls, degrees) -> "DegreeSpec":
        return cls("specified", tuple((d,) for d in degrees))

    def allowed(self, v: int) -> frozenset:
        """D(v) as a set of admissible tree degrees."""
        vs = self.values[v - 1]
        if self.variant == "bounded":
            return frozenset(range(1, vs[0] + 1)) if vs else frozenset()
        return frozenset(vs)

    def d(self, v: int) -> int:
        vs = self.values[v - 1]
        return vs[-1] if vs else 0

    @property
    def r(self) -> int:
        return max((vs[-1] for vs in self.values if vs), default=0)


@dataclass(frozen=True)
class Instance:
    graph: Graph
    degrees: DegreeSpec
    weights: Optional[tuple] = None
    bound: Optional[int] = None

    def __post_init__(self):
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(self.weights))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def variant(self) -> str:
        return self.degrees.variant

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    @property
    def max_weight(self) -> int:
        return max(self.weights, default=0) if self.weights else 0

    def weight(self, i: int) -> int:
        return self.weights[i] if self.weights is not None else 0

    def allowed(self, v: int) -> frozenset:
        return self.degrees.allowed(v)


@dataclass
class SolveResult:
    answer: str
    engine: str
    min_cost: Optional[int] = None
    reps: int = 1
    seed: Optional[int] = None
    witness: Optional[tuple] = None
    stats: dict = field(default_factory=dict)
    one_sided: bool = False

    @property
    def yes(self) -> bool:
        return self.answer == "yes"


@dataclass(frozen=True)
class EarlyReject:
    reason: str


class VariantError(ValueError):
    pass


def validate_instance(inst: Instance) -> list:
    """Return the list of violated invariants; empty means usable."""
    out = []
    g = inst.graph
    if g.n < 1:
        out.append("empty-graph")
    seen = set()
    for u, v in g.edges:
        if not (1 <= u <= g.n and 1 <= v <= g.n):
            out.append("endpoint-out-of-range")
        elif u == v:
            out.append("self-loop")
        elif (u, v) in seen:
            out.append("duplicate-edge")
        seen.add((u, v))
    if inst.variant not in VARIANTS:
        out.append("unknown-variant")
    if len(inst.degrees.values) != g.n:
        out.append("degree-missing")
    else:
        for vs in inst.degrees.values:
            if not vs:
                out.append("degree-missing")
            elif vs[0] < 1:
                out.append("degree-nonpositive")
            elif inst.variant in ("bounded", "specified") and len(vs) != 1:
                out.append("degree-arity")
    if (inst.weights is None) != (inst.bound is None):
        out.append("weights-bound-mismatch")
    if inst.weights is not None:
        if len(inst.weights) != g.m:
            out.append("weights-count")
        if any((not isinstance(w, int)) or w < 0 for w in inst.weights):
            out.append("negative-weight")
        if inst.bound is not None and inst.bound < 0:
            out.append("negative-bound")
    if "endpoint-out-of-range" not in out and g.n >= 1 and not g.is_connected():
        out.append("disconnected")
    # keep one entry per violation class, first-seen order
    return list(dict.fromkeys(out))


def specified_to_bounded(inst: Instance):
    if inst.variant != "specified":
        raise VariantError(f"expected specified variant, got {inst.variant}")
    total = sum(vs[0] for vs in inst.degrees.values)
    if total != 2 * inst.n - 2:
        return EarlyReject(f"degree sum {total} != {2 * inst.n - 2}")
    return replace(inst, degrees=DegreeSpec("bounded", inst.degrees.values))


def bounded_to_set(inst: Instance) -> Instance:
    if inst.variant != "bounded":
        raise VariantError(f"expected bounded variant, got {inst.variant}")
    sets = tuple(tuple(range(1, vs[0] + 1)) for vs in inst.degrees.values)
    return replace(inst, degrees=DegreeSpec("set", sets))


def max_requirement(inst: Instance) -> int:
    return inst.degrees.r


def to_set_variant(inst: Instance):
    """Route any variant to the set variant; may return EarlyReject."""
    if inst.variant == "specified":
        inst = specified_to_bounded(inst)
        if isinstance(inst, EarlyReject):
            return inst
    if inst.variant == "bounded":
        inst = bounded_to_set(inst)
    return inst


def clamp_degrees(inst: Instance) -> Instance:
    """Drop listed degrees above n-1 (unreachable in any spanning tree)."""
    cap = max(inst.n - 1, 0)
    if inst.degrees.r <= cap:
        return inst
    log.warning("clamping degree requirements above n-1=%d", cap)
    if inst.variant == "bounded":
        vals = tuple((min(vs[0], cap),) if vs else vs for vs in inst.degrees.values)
        # a bound of 0 only happens for n=1, which is a no-instance anyway
        vals = tuple(vs if vs and vs[0] >= 1 else (1,) for vs in vals)
    elif inst.variant == "set":
        vals = tuple(tuple(x for x in vs if x <= cap) for vs in inst.degrees.values)
    else:
        return inst  # an exact degree above n-1 fails the degree-sum screen
    return replace(inst, degrees=DegreeSpec(inst.variant, vals))


def screen(inst: Instance):
    """Cheap sound rejections shared by every engine.

    Returns an EarlyReject or the set-variant instance to hand to an engine.
    """
    if inst.graph.n >= 1 and not inst.graph.is_connected():
        return EarlyReject("disconnected")
    inst = to_set_variant(inst)
    if isinstance(inst, EarlyReject):
        return inst
    inst = clamp_degrees(inst)
    n = inst.n
    sets = [inst.allowed(v) for v in inst.graph.vertices]
    if n == 1:
        return EarlyReject("single vertex has tree degree 0")
    if any(not s for s in sets):
        return EarlyReject("empty degree set")
    if sum(max(s) for s in sets) < 2 * n - 2:
        return EarlyReject("maximum degree sum below 2n-2")
    if sum(min(s) for s in sets) > 2 * n - 2:
        return EarlyReject("minimum degree sum above 2n-2")
    return inst
