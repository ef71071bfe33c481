"""ReduceVector and ReduceToNice.

Work states are (A, b): A a tuple of vectors addressed by position, b a
k-tuple of positions (None for an index no vector covers). States are
deduplicated through ``state_key`` which forgets positions but keeps, for
every vector, the set of indices whose big vector it is.
"""

from __future__ import annotations

from dataclasses import dataclass

from .patterns import Pattern, is_unit, is_zero, make_pattern, unit


def initial_big_vectors(A) -> tuple:
    """Per index, the lexicographically largest vector with a positive entry there."""
    k = len(A[0]) if A else 0
    b = []
    for i in range(k):
        cands = [p for p, v in enumerate(A) if v[i] >= 1]
        b.append(max(cands, key=lambda p: (A[p], -p)) if cands else None)
    return tuple(b)


def state_key(A, b) -> tuple:
    return tuple(sorted((A[p], tuple(i for i, bp in enumerate(b) if bp == p)) for p in range(len(A))))


def decode_state(key):
    A = tuple(v for v, _ in key)
    k = len(A[0]) if A else 0
    b = [None] * k
    for p, (_, idx) in enumerate(key):
        for i in idx:
            b[i] = p
    return A, tuple(b)


def reduce_vector(A, b, pu: int) -> list:
    """Split member pu of A over its coordinates not already owned by it.

    For the j-th such coordinate i_j, the earlier coordinates i_1..i_{j-1}
    hand their entry to their big vectors, the remainder of u minus e_{i_j}
    is merged into b(i_j), and u shrinks to e_{i_j}. This is the chain of
    pi-rule applications the procedure stands for. When u owns coordinates
    itself (a big vector), the chain's final pi2 branch is live and is
    returned as one more member.
    """
    u = A[pu]
    k = len(u)
    idxs = [i for i in range(k) if u[i] >= 1 and b[i] != pu]
    if not idxs:
        raise ValueError("member has no coordinate owned by another big vector")
    out = []
    for j, ij in enumerate(idxs):
        W = [list(v) for v in A]
        rem = list(u)
        for t in idxs[:j]:
            W[b[t]][t] += u[t]
            rem[t] = 0
        rem[ij] -= 1
        target = b[ij]
        W[target] = [x + y for x, y in zip(W[target], rem)]
        W[pu] = list(unit(k, ij + 1))
        nb = tuple(target if bp == pu else bp for bp in b)
        out.append((tuple(tuple(v) for v in W), nb))
    if any(u[i] >= 1 and b[i] == pu for i in range(k)):
        # the last pi2 branch: u gives every foreign coordinate away and
        # keeps the ones it owns. Without owned coordinates u would become
        # a finished component beside others, which is dead and dropped.
        W = [list(v) for v in A]
        for t in idxs:
            W[b[t]][t] += u[t]
            W[pu][t] = 0
        out.append((tuple(tuple(v) for v in W), tuple(b)))
    return out


@dataclass
class ReduceStats:
    stage2_rounds: int = 0
    stage3_rounds: int = 0
    vectors: int = 0


def _fixpoint(states: set, step) -> tuple:
    """Iterate to the fixpoint; also return how many rounds changed something."""
    rounds = 0
    while True:
        nxt = set()
        for key in states:
            nxt.update(step(key))
        if nxt == states:
            return states, rounds
        states = nxt
        rounds += 1


def _stage2_step(key):
    A, b = decode_state(key)
    owned = set(x for x in b if x is not None)
    for p, v in enumerate(A):
        if p not in owned and not is_unit(v) and not is_zero(v):
            return [state_key(*s) for s in reduce_vector(A, b, p)]
    return [key]


def _stage3_step(key):
    A, b = decode_state(key)
    k = len(b)
    for i in range(k):
        if b[i] is None:
            continue
        for t in range(k):
            if t != i and b[t] is not None and b[t] != b[i] and A[b[i]][t] >= 1:
                return [state_key(*s) for s in reduce_vector(A, b, b[i])]
    return [key]


def reduce_to_nice(A: Pattern, stats: ReduceStats = None) -> set:
    if sum(1 for v in A if is_zero(v)) > 1:
        raise ValueError("pattern has more than one zero vector")
    A = make_pattern(A)
    states = {state_key(A, initial_big_vectors(A))}
    states, r2 = _fixpoint(states, _stage2_step)
    states, r3 = _fixpoint(states, _stage3_step)
    if stats is not None:
        stats.stage2_rounds, stats.stage3_rounds, stats.vectors = r2, r3, len(A)
    return {make_pattern(v for v, _ in key) for key in states}
