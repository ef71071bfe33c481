import logging

import pytest

from degmst.core import DegreeSpec, Graph, Instance

logging.getLogger("degmst").setLevel(logging.ERROR)


def graph(n, edges):
    return Graph(n, tuple(edges))


def path(n):
    return graph(n, [(i, i + 1) for i in range(1, n)])


def cycle(n):
    return graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def complete(n):
    return graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def star(leaves):
    return graph(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


def inst_sets(G, sets, weights=None, bound=None):
    return Instance(G, DegreeSpec.from_sets(sets), weights, bound)


def inst_bounded(G, bounds, weights=None, bound=None):
    return Instance(G, DegreeSpec.bounded(bounds), weights, bound)


def inst_specified(G, degs, weights=None, bound=None):
    return Instance(G, DegreeSpec.specified(degs), weights, bound)


@pytest.fixture
def k2_unit():
    return inst_sets(path(2), [[1], [1]])


ACCEPTANCE_LINES = []


def report_acceptance(capsys, number, ok, detail):
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
