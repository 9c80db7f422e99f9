"""Abstract strategic games and their non-deterministic equilibria.

An agent's pure strategy is read as a function from opponent sub-profiles
(contexts) to outcomes. The best-response variants compare these functions
through :func:`ndgame.order.fn_less` on different context sets:

* ``BR1``  -- undominated over all contexts,
* ``BR2``  -- undominated over the contexts allowed by the opponents' cells,
* ``BR3``  -- a best reply to at least one allowed context,
* ``BR4``  -- no challenger beats it on every allowed context,
* ``FULL`` -- the intersection of ``BR1``, ``BR2`` and ``BR3``.

The equilibrium solver iterates the combined best response from the full
profile with :func:`ndgame.lattice.iterate_prefixpoint`.
"""
from __future__ import annotations

import enum
import itertools
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field

from . import lattice
from .errors import (
    CollapsedToBottom,
    EmptyCell,
    MalformedProfile,
    ShapeMismatch,
    UnknownAgent,
    UnknownStrategy,
    ValidationError,
)
from .lattice import BOTTOM, NdProfile, ProfileShape
from .order import OutcomeFunction, Preference, fn_less


class BRVariant(enum.Enum):
    FULL = "full"
    BR1 = "br1"
    BR2 = "br2"
    BR3 = "br3"
    BR4 = "br4"

    @classmethod
    def parse(cls, text: str) -> BRVariant:
        return cls(text.lower())


@dataclass(frozen=True)
class StrategicGame:
    """Agents, strategy sets, an outcome table and one preference per agent.

    ``table`` maps pure profiles (tuples in ``agents`` order) to outcomes.
    ``payoffs`` is set for numeric games and maps each outcome to its payoff
    vector; it is informational once the preferences are built.
    """

    agents: tuple
    strategies: Mapping
    table: Mapping
    prefs: Mapping
    payoffs: Mapping | None = None
    name: str = "game"
    _fns: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        agents = tuple(self.agents)
        object.__setattr__(self, "agents", agents)
        if not agents:
            raise ValidationError("a game needs at least one agent")
        if len(set(agents)) != len(agents):
            raise ValidationError("duplicate agent", identifier=agents)
        strategies = {}
        for a in agents:
            if a not in self.strategies:
                raise ValidationError(f"no strategies for agent {a!r}", identifier=a)
            ss = tuple(self.strategies[a])
            if not ss:
                raise ValidationError(f"agent {a!r} has no strategies", identifier=a)
            if len(set(ss)) != len(ss):
                raise ValidationError(f"duplicate strategy for agent {a!r}", identifier=a)
            strategies[a] = ss
        object.__setattr__(self, "strategies", strategies)

        table = dict(self.table)
        for s in itertools.product(*(strategies[a] for a in agents)):
            if s not in table:
                raise ValidationError(f"missing cell {s!r}", identifier=s)
        if len(table) != len(list(itertools.product(*strategies.values()))):
            extra = [s for s in table if not _well_formed(agents, strategies, s)]
            raise ValidationError(f"cell for unknown profile {extra[0]!r}", identifier=extra[0])
        object.__setattr__(self, "table", table)

        outcomes = set(table.values())
        prefs = {}
        for a in agents:
            p = self.prefs.get(a) if self.prefs is not None else None
            if p is None:
                p = Preference.empty(outcomes)
            missing = outcomes - p.domain
            if missing:
                oc = sorted(map(str, missing))[0]
                raise ValidationError(
                    f"outcome {oc!r} missing from the preference of {a!r}", identifier=oc
                )
            if any(x == y for x, y in p.relation):
                raise ValidationError(f"preference of {a!r} is not irreflexive", identifier=a)
            prefs[a] = p
        object.__setattr__(self, "prefs", prefs)
        object.__setattr__(self, "_fns", {})

    @classmethod
    def from_payoffs(cls, agents, strategies, payoffs: Mapping, name: str = "game"):
        """Numeric game: one fresh outcome per cell, preferences by payoff coordinate."""
        agents = tuple(agents)
        table, vectors = {}, {}
        for profile, vec in payoffs.items():
            profile = tuple(profile)
            vec = tuple(int(v) for v in vec)
            if len(vec) != len(agents):
                raise ValidationError(
                    f"cell {profile!r} needs {len(agents)} payoffs", identifier=profile
                )
            oc = ",".join(map(str, profile))
            table[profile] = oc
            vectors[oc] = vec
        prefs = {
            a: Preference.from_scores({oc: v[i] for oc, v in vectors.items()})
            for i, a in enumerate(agents)
        }
        return cls(agents, strategies, table, prefs, payoffs=vectors, name=name)

    @property
    def outcomes(self) -> frozenset:
        return frozenset(self.table.values())

    def payoff(self, s: Sequence, a) -> int:
        if self.payoffs is None:
            raise ValueError("game has no numeric payoffs")
        return self.payoffs[outcome_of(self, s)][self.agents.index(a)]


def _well_formed(agents, strategies, s) -> bool:
    return (
        isinstance(s, tuple)
        and len(s) == len(agents)
        and all(x in strategies[a] for a, x in zip(agents, s))
    )


def shape_of(g: StrategicGame) -> ProfileShape:
    return ProfileShape(tuple((a, None, frozenset(g.strategies[a])) for a in g.agents))


def _as_profile(g: StrategicGame, s) -> tuple:
    if isinstance(s, Mapping):
        try:
            s = tuple(s[a] for a in g.agents)
        except KeyError as e:
            raise MalformedProfile(f"profile has no choice for agent {e.args[0]!r}") from None
    s = tuple(s)
    if not _well_formed(g.agents, g.strategies, s):
        raise MalformedProfile(f"{s!r} is not a pure profile of {g.name!r}")
    return s


def _agent_index(g: StrategicGame, a) -> int:
    try:
        return g.agents.index(a)
    except ValueError:
        raise UnknownAgent(f"unknown agent {a!r}") from None


def outcome_of(g: StrategicGame, s) -> Hashable:
    return g.table[_as_profile(g, s)]


def _deviate(s: tuple, i: int, t) -> tuple:
    return s[:i] + (t,) + s[i + 1 :]


def happy(g: StrategicGame, a, s) -> bool:
    """No unilateral deviation of ``a`` yields an outcome ``a`` strictly prefers."""
    i = _agent_index(g, a)
    s = _as_profile(g, s)
    here = g.table[s]
    rel = g.prefs[a].relation
    return not any((here, g.table[_deviate(s, i, t)]) in rel for t in g.strategies[a])


def is_pure_nash(g: StrategicGame, s) -> bool:
    return all(happy(g, a, s) for a in g.agents)


def pure_nash_profiles(g: StrategicGame) -> list:
    return [
        s
        for s in itertools.product(*(g.strategies[a] for a in g.agents))
        if is_pure_nash(g, s)
    ]


def contexts(g: StrategicGame, a) -> list:
    """Opponent sub-profiles, as tuples in agent order without ``a``."""
    i = _agent_index(g, a)
    others = g.agents[:i] + g.agents[i + 1 :]
    return list(itertools.product(*(g.strategies[b] for b in others)))


def _join(c: tuple, i: int, s) -> tuple:
    return c[:i] + (s,) + c[i:]


def strategy_as_function(g: StrategicGame, a, s) -> OutcomeFunction:
    """``s`` as the map from opponent contexts to the outcome it yields."""
    i = _agent_index(g, a)
    if s not in g.strategies[a]:
        raise UnknownStrategy(f"{s!r} is not a strategy of {a!r}")
    cache = g._fns
    if (a, s) not in cache:
        cache[(a, s)] = OutcomeFunction(
            {c: g.table[_join(c, i, s)] for c in contexts(g, a)}, label=s
        )
    return cache[(a, s)]


def _flatten_gamma(g: StrategicGame, a, gamma) -> list:
    i = _agent_index(g, a)
    others = g.agents[:i] + g.agents[i + 1 :]
    if isinstance(gamma, NdProfile):
        cells = [gamma.cell(b) for b in others]
    else:
        try:
            cells = [frozenset(gamma[b]) for b in others]
        except KeyError as e:
            raise EmptyCell(f"no cell for opponent {e.args[0]!r}") from None
    for b, c in zip(others, cells):
        if not c:
            raise EmptyCell(f"opponent {b!r} has an empty cell")
        if not c <= set(g.strategies[b]):
            raise UnknownStrategy(f"cell of {b!r} has unknown strategies")
    return list(itertools.product(*(sorted(c, key=str) for c in cells)))


def best_response(g: StrategicGame, a, gamma, v: BRVariant = BRVariant.FULL) -> frozenset:
    """Strategies of ``a`` acceptable against the opponents' cells ``gamma``.

    ``gamma`` maps each opponent to a non-empty strategy set (an
    :class:`NdProfile` works too; ``a``'s own cell is ignored).
    """
    v = BRVariant(v)
    restrict = _flatten_gamma(g, a, gamma)
    pref = g.prefs[a]
    rel = pref.relation
    own = g.strategies[a]
    fns = {s: strategy_as_function(g, a, s) for s in own}

    def undominated(ctx):
        return {s for s in own if not any(fn_less(pref, fns[s], fns[t], ctx) for t in own)}

    def best_somewhere(ctx):
        return {
            s
            for s in own
            if any(not any((fns[s](c), fns[t](c)) in rel for t in own) for c in ctx)
        }

    if v is BRVariant.BR1:
        out = undominated(contexts(g, a))
    elif v is BRVariant.BR2:
        out = undominated(restrict)
    elif v is BRVariant.BR3:
        out = best_somewhere(restrict)
    elif v is BRVariant.BR4:
        out = {
            s
            for s in own
            if all(any((fns[s](c), fns[t](c)) not in rel for c in restrict) for t in own)
        }
    else:
        out = undominated(contexts(g, a)) & undominated(restrict) & best_somewhere(restrict)
    return frozenset(out)


def br_operator(g: StrategicGame, v: BRVariant = BRVariant.FULL):
    """Combined best response as a memoised operator on profiles.

    Each agent's cell depends only on the opponents' cells, so the cache is
    keyed per agent on those.
    """
    v = BRVariant(v)
    shape = shape_of(g)
    memo = {}

    def F(sigma):
        if sigma is BOTTOM:
            return BOTTOM
        cells = []
        for i, a in enumerate(g.agents):
            key = (i, sigma.cells[:i] + sigma.cells[i + 1 :])
            if key not in memo:
                memo[key] = best_response(g, a, sigma, v)
            cells.append(memo[key])
        if not all(cells):
            return BOTTOM
        return NdProfile(shape, tuple(cells))

    return F


def combined_br(g: StrategicGame, sigma: NdProfile, v: BRVariant = BRVariant.FULL):
    if sigma is BOTTOM:
        raise ValueError("combined best response of bottom")
    if sigma.shape != shape_of(g):
        raise ShapeMismatch("profile does not match the game")
    return br_operator(g, v)(sigma)


def is_nd_equilibrium(g: StrategicGame, sigma: NdProfile, v: BRVariant = BRVariant.FULL) -> bool:
    return lattice.leq(sigma, combined_br(g, sigma, v))


def is_strict_nd_equilibrium(
    g: StrategicGame, sigma: NdProfile, v: BRVariant = BRVariant.FULL
) -> bool:
    return combined_br(g, sigma, v) == sigma


def solve(g: StrategicGame, v: BRVariant = BRVariant.FULL):
    """Greatest-from-top equilibrium of ``g`` and the elimination trace."""
    v = BRVariant(v)
    try:
        return lattice.iterate_prefixpoint(br_operator(g, v), lattice.top(shape_of(g)))
    except CollapsedToBottom as e:
        raise CollapsedToBottom(
            f"{g.name}: {v.value} best response emptied a cell ({e}); "
            "check that every preference is a strict partial order",
            e.trace,
        ) from e


def cartesian_union(x: NdProfile, y: NdProfile) -> NdProfile:
    """Cell-wise union of two profiles of the same shape."""
    if x is BOTTOM or y is BOTTOM:
        raise ValueError("cartesian union is defined on non-bottom profiles")
    if x.shape != y.shape:
        raise ShapeMismatch("profiles have different shapes")
    return NdProfile(x.shape, tuple(a | b for a, b in zip(x.cells, y.cells)))
