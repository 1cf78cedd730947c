import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from l3col.graph import Graph
from l3col.instance import Instance

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def cycle(n):
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return Graph(range(n), itertools.combinations(range(n), 2))


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(range(10), outer + spokes + inner)


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(n), [e for e, keep in zip(pairs, mask) if keep])


LISTS = [frozenset(s) for k in (1, 2, 3) for s in itertools.combinations((1, 2, 3), k)]


@st.composite
def instances(draw, min_n=1, max_n=9, max_list=3, allow_empty=False):
    g = draw(graphs(min_n, max_n))
    choices = [s for s in LISTS if len(s) <= max_list]
    if allow_empty:
        choices = choices + [frozenset()]
    lists = {v: draw(st.sampled_from(choices)) for v in g.vertices}
    return Instance(g, lists)


@pytest.fixture
def c5():
    return cycle(5)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
