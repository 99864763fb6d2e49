from __future__ import annotations

import pytest

from srap.model import HyperLink, Link, build_instance


def hyper(nodes, cost=None, realization=None):
    nodes = frozenset(nodes)
    if realization is None and cost is None:
        cost = 1
    return HyperLink(nodes, cost if cost is not None else sum(l.cost for l in realization), realization)


def hyper_of_link(u, v, cost):
    return HyperLink(frozenset((u, v)), cost, (Link(u, v, cost),))


@pytest.fixture
def r4():
    return build_instance(4, 0, {0, 1, 2, 3}, [(1, 3, 1), (0, 2, 1)])


@pytest.fixture
def r4s():
    return build_instance(4, 0, {0, 1, 3}, [(1, 3, 1), (0, 2, 1)])


@pytest.fixture
def r6():
    return build_instance(6, 0, set(range(6)), [(0, 3, 1), (2, 4, 1)])


PATH_F0 = [(0, 1), (1, 2), (2, 3)]


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
