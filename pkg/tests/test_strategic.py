import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ndgame import corpus, lattice, oracle
from ndgame.errors import EmptyCell, MalformedProfile, UnknownAgent, UnknownStrategy, ValidationError
from ndgame.lattice import NdProfile, top
from ndgame.order import Preference
from ndgame.strategic import (
    BRVariant,
    StrategicGame,
    best_response,
    cartesian_union,
    combined_br,
    happy,
    is_nd_equilibrium,
    is_pure_nash,
    is_strict_nd_equilibrium,
    outcome_of,
    pure_nash_profiles,
    shape_of,
    solve,
    strategy_as_function,
)

V_ALL = {f"v{i}" for i in range(1, 6)}
H_ALL = {f"h{i}" for i in range(1, 6)}


def prof(g, **cells):
    return NdProfile.from_cells(shape_of(g), {(a, None): c for a, c in cells.items()})


def trivial_game():
    return StrategicGame.from_payoffs(["A"], {"A": ["only"]}, {("only",): (1,)}, name="one")


def empty_pref_game():
    strategies = {"A": ["a1", "a2"], "B": ["b1", "b2"]}
    table = {s: f"o{i}" for i, s in enumerate(itertools.product(*strategies.values()))}
    return StrategicGame(("A", "B"), strategies, table, prefs={})


# -- construction ---------------------------------------------------------------

def test_missing_cell_rejected():
    with pytest.raises(ValidationError):
        StrategicGame.from_payoffs(["A", "B"], {"A": ["a"], "B": ["b1", "b2"]}, {("a", "b1"): (0, 0)})


def test_preference_must_cover_outcomes():
    with pytest.raises(ValidationError):
        StrategicGame(("A",), {"A": ["a"]}, {("a",): "x"}, prefs={"A": Preference.empty({"y"})})


# -- pure games -------------------------------------------------------------------

def test_outcome_of(no_pure_nash):
    assert outcome_of(no_pure_nash, ("v1", "h1")) == "oc1"
    assert outcome_of(no_pure_nash, ("v2", "h2")) == "oc4"
    assert outcome_of(trivial_game(), ("only",)) == "only"
    with pytest.raises(MalformedProfile):
        outcome_of(no_pure_nash, ("v1",))


def test_happy(no_pure_nash):
    assert happy(trivial_game(), "A", ("only",))
    assert not happy(no_pure_nash, "V", ("v1", "h1"))
    g = empty_pref_game()
    assert all(happy(g, a, s) for a in g.agents for s in g.table)
    with pytest.raises(UnknownAgent):
        happy(no_pure_nash, "Q", ("v1", "h1"))


def test_pure_nash(no_pure_nash, fivebyfive):
    assert not any(is_pure_nash(no_pure_nash, s) for s in no_pure_nash.table)
    assert pure_nash_profiles(no_pure_nash) == []
    assert is_pure_nash(trivial_game(), ("only",))
    g = empty_pref_game()
    assert all(is_pure_nash(g, s) for s in g.table)
    assert pure_nash_profiles(fivebyfive) == [("v1", "h2"), ("v1", "h3"), ("v2", "h1")]


def test_strategy_as_function(fivebyfive):
    f = strategy_as_function(fivebyfive, "V", "v1")
    assert [fivebyfive.payoffs[f((f"h{i}",))][0] for i in range(1, 6)] == [0, 3, 2, 2, 3]
    f = strategy_as_function(fivebyfive, "H", "h5")
    assert [fivebyfive.payoffs[f((f"v{i}",))][1] for i in range(1, 6)] == [0, 2, 2, 0, 0]
    with pytest.raises(UnknownStrategy):
        strategy_as_function(fivebyfive, "H", "v1")


def test_strategy_as_function_small(no_pure_nash):
    f = strategy_as_function(no_pure_nash, "V", "v2")
    assert f.values == {("h1",): "oc3", ("h2",): "oc4"}


# -- best responses -----------------------------------------------------------------

def test_best_response_first_round(fivebyfive):
    assert "h5" not in best_response(fivebyfive, "H", {"V": V_ALL})
    assert best_response(fivebyfive, "V", {"H": H_ALL}) == {"v1", "v2", "v3"}


def test_best_response_singleton_agent():
    g = StrategicGame.from_payoffs(
        ["A", "B"], {"A": ["a"], "B": ["b1", "b2"]}, {("a", "b1"): (0, 2), ("a", "b2"): (5, 1)}
    )
    for v in BRVariant:
        assert best_response(g, "A", {"B": {"b2"}}, v) == {"a"}


def test_best_response_empty_gamma(fivebyfive):
    with pytest.raises(EmptyCell):
        best_response(fivebyfive, "V", {"H": set()})


def test_combined_br_examples(fivebyfive):
    g = fivebyfive
    first = combined_br(g, top(shape_of(g)))
    assert first.cell("V") == {"v1", "v2", "v3"}
    assert first.cell("H") == {"h1", "h2", "h3", "h4"}
    fixed = prof(g, V={"v1", "v2"}, H={"h1", "h2"})
    assert lattice.leq(fixed, combined_br(g, fixed))
    t = trivial_game()
    assert combined_br(t, top(shape_of(t))) == top(shape_of(t))


def test_equilibrium_predicates(fivebyfive, no_pure_nash):
    g = fivebyfive
    fixed = prof(g, V={"v1", "v2"}, H={"h1", "h2"})
    assert is_nd_equilibrium(g, fixed)
    assert not is_nd_equilibrium(g, top(shape_of(g)))
    assert is_strict_nd_equilibrium(g, fixed)
    assert not is_strict_nd_equilibrium(g, prof(g, V={"v1"}, H={"h1", "h2"}))
    assert is_nd_equilibrium(no_pure_nash, top(shape_of(no_pure_nash)))
    t = trivial_game()
    assert is_strict_nd_equilibrium(t, top(shape_of(t)))


# -- solve ----------------------------------------------------------------------

def test_solve_fivebyfive(fivebyfive):
    r, trace = solve(fivebyfive)
    assert r == prof(fivebyfive, V={"v1", "v2"}, H={"h1", "h2"})
    assert [set(s for _, s in rnd) for rnd in trace.rounds] == [
        {"v4", "v5", "h5"}, {"h4"}, {"v3"}, {"h3"},
    ]


@pytest.mark.parametrize(
    "variant, v_cell, h_cell",
    [
        (BRVariant.BR1, {"v1", "v2", "v3", "v4"}, {"h1", "h2", "h3", "h4"}),
        (BRVariant.BR2, {"v1", "v2", "v3", "v4"}, {"h1", "h2", "h3", "h4"}),
        (BRVariant.BR3, {"v1", "v2"}, {"h1", "h2", "h3"}),
        (BRVariant.BR4, V_ALL, H_ALL),
    ],
)
def test_solve_fivebyfive_variants(fivebyfive, variant, v_cell, h_cell):
    r, _ = solve(fivebyfive, variant)
    assert r == prof(fivebyfive, V=v_cell, H=h_cell)
    assert r in oracle.all_equilibria(fivebyfive, variant)


def test_solve_no_pure_nash_is_top(no_pure_nash):
    r, _ = solve(no_pure_nash)
    assert r == top(shape_of(no_pure_nash))
    assert r in oracle.all_equilibria(no_pure_nash)


def test_solve_dominant_strategies():
    g = corpus.load("dominant.ndg").game
    r, _ = solve(g)
    assert r.pure_count() == 1
    assert oracle.verify_engine(g).ok
    # a hand-made 2x2 with a strictly dominant row and column
    g = StrategicGame.from_payoffs(
        ["A", "B"], {"A": ["x", "y"], "B": ["p", "q"]},
        {("x", "p"): (2, 2), ("x", "q"): (3, 1), ("y", "p"): (1, 3), ("y", "q"): (0, 0)},
    )
    r, _ = solve(g)
    assert r == prof(g, A={"x"}, B={"p"})
    assert r in oracle.all_equilibria(g)


# -- cartesian union --------------------------------------------------------------

def test_cartesian_union(no_pure_nash):
    g = no_pure_nash
    x = prof(g, V={"v1"}, H={"h1"})
    assert cartesian_union(x, x) == x
    assert cartesian_union(x, prof(g, V={"v2"}, H={"h2"})) == top(shape_of(g))
    assert cartesian_union(x, top(shape_of(g))) == top(shape_of(g))


# -- properties on random games ---------------------------------------------------

@given(st.integers(0, 10**6))
def test_br1_constant_in_gamma(seed):
    rng = random.Random(seed)
    g = oracle.random_strategic_game(rng)
    t = top(shape_of(g))
    for a in g.agents:
        base = best_response(g, a, t, BRVariant.BR1)
        for _ in range(3):
            gamma = lattice.random_subprofile(t, rng)
            assert best_response(g, a, gamma, BRVariant.BR1) == base
    # equilibria are exactly the profiles below the BR1 image of top
    box = combined_br(g, t, BRVariant.BR1)
    for z in oracle.enumerate_nd_profiles(shape_of(g)):
        assert is_nd_equilibrium(g, z, BRVariant.BR1) == lattice.leq(z, box)


@given(st.integers(0, 10**6))
def test_br3_monotone(seed):
    rng = random.Random(seed)
    g = oracle.random_strategic_game(rng)
    t = top(shape_of(g))
    big = lattice.random_subprofile(t, rng)
    small = lattice.random_subprofile(big, rng)
    for a in g.agents:
        assert best_response(g, a, small, BRVariant.BR3) <= best_response(g, a, big, BRVariant.BR3)


def _descending_chains(g, a):
    """All descending chains of opponent profiles, as lists of NdProfiles (length at most 3)."""
    elems = list(lattice.subprofiles(top(shape_of(g))))
    i = g.agents.index(a)
    opp = {}
    for e in elems:
        opp.setdefault(e.cells[:i] + e.cells[i + 1:], e)
    reps = list(opp.values())
    for x in reps:
        yield [x]
        for y in reps:
            if y != x and lattice.leq(y, x):
                yield [x, y]
                for z in reps:
                    if z != y and lattice.leq(z, y):
                        yield [x, y, z]


@pytest.mark.parametrize("seed", range(6))
def test_full_chain_intersection(seed):
    rng = random.Random(seed)
    g = oracle.random_strategic_game(rng, n_agents=(2, 2))
    for a in g.agents:
        for chain in _descending_chains(g, a):
            acc = frozenset(g.strategies[a])
            for gamma in chain:
                acc &= best_response(g, a, gamma, BRVariant.FULL)
            assert acc


@pytest.mark.parametrize("seed", range(30))
def test_enlargement_preserves_equilibria(seed):
    g = oracle.random_strategic_game(random.Random(seed))
    eqs = {v: oracle.all_equilibria(g, v) for v in BRVariant}
    full = eqs[BRVariant.FULL]
    assert full, "FULL equilibria exist"
    for v in (BRVariant.BR1, BRVariant.BR2, BRVariant.BR3):
        assert full <= eqs[v]
    assert eqs[BRVariant.BR2] <= eqs[BRVariant.BR4]


@pytest.mark.parametrize("seed", range(30))
def test_monotone_variants_give_union(seed):
    g = oracle.random_strategic_game(random.Random(seed))
    for v in (BRVariant.BR3, BRVariant.BR4):
        eqs = oracle.all_equilibria(g, v)
        r, _ = solve(g, v)
        assert r == oracle.union_all(eqs)
        for x, y in itertools.combinations(eqs, 2):
            assert cartesian_union(x, y) in eqs


@given(st.integers(0, 10**6), st.sampled_from(list(BRVariant)))
def test_solve_postconditions(seed, v):
    g = oracle.random_strategic_game(random.Random(seed))
    r, trace = solve(g, v)
    assert is_nd_equilibrium(g, r, v)
    assert trace.iterations <= 1 + sum(len(s) for s in g.strategies.values())
