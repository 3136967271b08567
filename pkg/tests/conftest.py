import random

import pytest
from hypothesis import strategies as st

from treemla import Arrangement, prufer_decode

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def trees(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    seq = draw(st.lists(st.integers(1, n), min_size=max(n - 2, 0), max_size=max(n - 2, 0)))
    return prufer_decode(seq, n)


@st.composite
def trees_with_arrangement(draw, min_n=1, max_n=12):
    t = draw(trees(min_n, max_n))
    return t, Arrangement(tuple(draw(st.permutations(t.vertices))))


@pytest.fixture
def rng():
    return random.Random(20161212)
