import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from finspace.poset import MonotoneMap, Poset, cone_over, inclusion, interval, pseudocircle

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def posets(draw, min_size=1, max_size=5):
    n = draw(st.integers(min_size, max_size))
    labels = [f"p{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    rels = [(labels[i], labels[j]) for (i, j), b in zip(pairs, bits) if b]
    return Poset(labels, rels)


@st.composite
def seeded_rng(draw):
    return random.Random(draw(st.integers(0, 2 ** 32 - 1)))


@pytest.fixture
def cone_map():
    """S1 with an apex m mapped onto Sigma = {0 < 1}: the circle goes to 0, m to 1."""
    c = cone_over(pseudocircle(), "m")
    return MonotoneMap(c, interval(), {"a": "0", "b": "0", "c": "0", "d": "0", "m": "1"})


@pytest.fixture
def open_point_inclusion():
    """The open point g of {c < g} included into it."""
    two = Poset(["c", "g"], [("c", "g")])
    return inclusion(two, ["g"])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
