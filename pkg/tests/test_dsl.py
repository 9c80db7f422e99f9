import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ndgame import corpus, dsl, oracle
from ndgame.errors import ParseError, ValidationError
from ndgame.lattice import BOTTOM
from ndgame.multigame import solve_multi
from ndgame.strategic import solve

HEADER = "game g\nagents A B\noutcomes numeric\nstrategies A: a1 a2\nstrategies B: b1\n"


@pytest.mark.parametrize("name", corpus.names())
def test_corpus_round_trip(name):
    doc = corpus.load(name)
    assert dsl.parse(dsl.render(doc)) == doc


@pytest.mark.parametrize("name", corpus.names())
def test_corpus_solves(name):
    doc = corpus.load(name)
    if doc.kind == dsl.MULTI:
        r, _ = solve_multi(doc.game)
    else:
        r, _ = solve(doc.game)
    assert r is not BOTTOM


def test_fivebyfive_structure():
    doc = corpus.load("fivebyfive.ndg")
    g = doc.game
    assert doc.kind == dsl.STRATEGIC and doc.name == "fivebyfive"
    assert g.agents == ("V", "H")
    assert [len(g.strategies[a]) for a in g.agents] == [5, 5]
    assert len(g.table) == 25
    assert g.payoff(("v2", "h1"), "V") == 3


def test_explicit_preferences():
    g = corpus.load("no_pure_nash.ndg").game
    assert ("oc1", "oc3") in g.prefs["V"].relation
    assert ("oc2", "oc1") in g.prefs["H"].relation
    assert g.payoffs is None


def test_graph_game_structure():
    doc = corpus.load("graph_game.ndmg")
    g = doc.game
    assert doc.kind == dsl.MULTI
    assert g.nodes == ("n1", "n2", "n3") and g.start == "n1"
    assert g.local_strategies[("n3", "V")] == ("v",)
    assert g.transition["n1"][("v2", "h2")][1] == "n3"


def test_comments_and_blank_lines():
    text = "# leading\n\n" + HEADER + "cell (a1,b1) -> 1 2   # trailing\ncell (a2,b1) -> 0 0\n"
    assert dsl.parse(text).game.payoff(("a1", "b1"), "B") == 2


def test_indifference_round_trip():
    text = (
        "game ind\nagents A\noutcomes x y z\nstrategies A: p q r\n"
        "prefs A: x < z, x = y\ncell (p) -> x\ncell (q) -> y\ncell (r) -> z\n"
    )
    doc = dsl.parse(text)
    assert ("y", "z") in doc.game.prefs["A"].relation
    assert dsl.parse(dsl.render(doc)) == doc


def test_explicit_multigame_round_trip():
    text = (
        "multigame m\nagents A\nnodes n\noutcomes x y\nprefs A: x < y\n"
        "node n:\n  strategies A: p q\n"
        "  cell (p) -> outcome x next n\n  cell (q) -> outcome y next n\n"
    )
    doc = dsl.parse(text)
    assert dsl.parse(dsl.render(doc)) == doc
    r, _ = solve_multi(doc.game)
    assert r.cell("A", "n") == {"q"}


# -- errors ---------------------------------------------------------------------

def test_undeclared_node():
    text = (
        "multigame m\nagents A\nnodes n\nnode n:\n  strategies A: a\n"
        "  cell (a) -> 1 next elsewhere\n"
    )
    with pytest.raises(ValidationError) as info:
        dsl.parse(text)
    assert "elsewhere" in str(info.value)


def test_missing_cell():
    with pytest.raises(ValidationError):
        dsl.parse(HEADER + "cell (a1,b1) -> 1 2\n")


def test_preference_cycle():
    text = (
        "game c\nagents A\noutcomes x y\nstrategies A: p q\n"
        "prefs A: x < y, y < x\ncell (p) -> x\ncell (q) -> y\n"
    )
    with pytest.raises(ValidationError) as info:
        dsl.parse(text)
    assert info.value.line == 5


def test_unknown_strategy_in_cell():
    with pytest.raises(ValidationError):
        dsl.parse(HEADER + "cell (a1,b1) -> 1 2\ncell (a2,zz) -> 0 0\n")


def test_wrong_payoff_width():
    with pytest.raises(ValidationError):
        dsl.parse(HEADER + "cell (a1,b1) -> 1\ncell (a2,b1) -> 0 0\n")


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        dsl.parse(HEADER + "cell (a1,b1) => 1 2\n")
    assert info.value.line == 6
    assert str(info.value).startswith("line 6, column")


def test_unknown_keyword():
    with pytest.raises(ParseError):
        dsl.parse("game g\nfrobnicate x\n")


def test_missing_agents():
    with pytest.raises(ParseError):
        dsl.parse("game g\n")


@given(st.integers(0, 10**6))
def test_random_strategic_round_trip(seed):
    g = oracle.random_strategic_game(random.Random(seed), name="r")
    doc = dsl.document_of(g)
    assert dsl.parse(dsl.render(doc)) == doc


@given(st.integers(0, 10**6))
def test_random_multigame_round_trip(seed):
    g = oracle.random_multi_game(random.Random(seed), name="r")
    doc = dsl.document_of(g)
    again = dsl.parse(dsl.render(doc))
    assert again.game.transition == g.transition
    assert again.game.prefs == g.prefs
