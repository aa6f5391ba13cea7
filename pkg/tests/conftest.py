from fractions import Fraction

import pytest
from hypothesis import strategies as st

from undominated.core import CommitteeDistribution, Election
from undominated.profiles import gen_cyclic

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def cyclic6():
    return gen_cyclic(6)


@pytest.fixture
def fig1():
    """The three diametric pairs of the 6-cycle with masses 0.45 / 0.35 / 0.20."""
    return CommitteeDistribution.from_pairs({
        (1, 4): Fraction(9, 20),
        (2, 5): Fraction(7, 20),
        (3, 6): Fraction(1, 5),
    })


@st.composite
def elections(draw, max_candidates=5, max_voters=7, min_candidates=1):
    m = draw(st.integers(min_candidates, max_candidates))
    n = draw(st.integers(1, max_voters))
    rows = draw(st.lists(st.permutations(list(range(1, m + 1))), min_size=n, max_size=n))
    return Election(rows)


@st.composite
def distributions(draw, m, max_size=3, max_support=4):
    committees = st.sets(st.integers(1, m), min_size=1, max_size=min(max_size, m)).map(frozenset)
    support = draw(st.lists(committees, min_size=1, max_size=max_support, unique=True))
    raw = draw(st.lists(st.integers(1, 20), min_size=len(support), max_size=len(support)))
    total = sum(raw)
    return CommitteeDistribution.from_pairs([(tuple(c), Fraction(w, total)) for c, w in zip(support, raw)])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}: {text}")
