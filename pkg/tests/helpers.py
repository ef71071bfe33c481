"""Shared oracles for white-box engine tests."""

from degmst.core import screen
from degmst.cutcount import sample_isolation_weights
from degmst.oracle import count_cuts_and_solutions


def root_cells(root, n):
    """(w1, w2) -> value mod 4 on the a = n-1 row of a root table."""
    x = root.entries.get(())
    if x is None:
        return {}
    return {(w1, w2): v for (a, w1, w2), v in root.domain.nonzero_cells(x).items() if a == n - 1}


def expected_cells(prepared, iso, w1_cap):
    sc = count_cuts_and_solutions(prepared, iso.values, cap=8)
    return {k: c % 4 for k, c in sc.cuts.items() if c % 4 and k[0] <= w1_cap}


def check_root(prepared, runner, seed):
    iso = sample_isolation_weights(prepared, seed)
    cap = (prepared.n - 1) * prepared.max_weight
    root = runner(prepared, iso, cap)
    return root_cells(root, prepared.n), expected_cells(prepared, iso, cap)


def prepare(inst):
    p = screen(inst)
    return None if not hasattr(p, "graph") else p
