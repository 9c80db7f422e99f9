import itertools
import sys

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from ndgame import corpus
from ndgame.order import EventuallyPeriodicSeq, OutcomeFunction, Preference, validate_preference

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

OUTCOMES = ["o0", "o1", "o2", "o3", "o4"]


@pytest.fixture(scope="session")
def fivebyfive():
    return corpus.load("fivebyfive.ndg").game


@pytest.fixture(scope="session")
def no_pure_nash():
    return corpus.load("no_pure_nash.ndg").game


@pytest.fixture(scope="session")
def graph_game():
    return corpus.load("graph_game.ndmg").game


@st.composite
def strict_orders(draw, outcomes=OUTCOMES):
    """Random strict partial order: a sub-DAG of a random linear order."""
    perm = draw(st.permutations(outcomes))
    pairs = [(x, y) for i, x in enumerate(perm) for y in perm[i + 1:]]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return validate_preference(chosen, outcomes)


@st.composite
def score_orders(draw, outcomes=OUTCOMES):
    scores = draw(st.lists(st.integers(0, 3), min_size=len(outcomes), max_size=len(outcomes)))
    return Preference.from_scores(dict(zip(outcomes, scores)))


preferences = st.one_of(strict_orders(), score_orders())


def outcome_functions(contexts, outcomes=OUTCOMES):
    return st.lists(
        st.sampled_from(outcomes), min_size=len(contexts), max_size=len(contexts)
    ).map(lambda vals: OutcomeFunction(dict(zip(contexts, vals))))


outcome_sets = st.frozensets(st.sampled_from(OUTCOMES), min_size=1, max_size=3)


@st.composite
def periodic_seqs(draw, max_len=4):
    states = draw(st.lists(outcome_sets, min_size=1, max_size=max_len))
    cs = draw(st.integers(0, len(states) - 1))
    return EventuallyPeriodicSeq(tuple(states), cs)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
