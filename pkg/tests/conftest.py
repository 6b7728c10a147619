import random

import pytest
from hypothesis import strategies as st

from commapres.setkit import FinMap, FinSet, Span


@st.composite
def maps(draw, dom_size=None, cod_size=None, max_size=5):
    n = draw(st.integers(0, max_size)) if dom_size is None else dom_size
    lo = 1 if n else 0
    m = draw(st.integers(lo, max(lo, max_size))) if cod_size is None else cod_size
    table = draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n)) if m else []
    return FinMap(FinSet(n), FinSet(m), tuple(table))


@st.composite
def spans(draw, max_size=5):
    left = draw(maps(max_size=max_size))
    right = draw(maps(dom_size=left.dom.size, max_size=max_size))
    return Span(left, right)


@pytest.fixture
def rng():
    return random.Random(20240601)


_ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
