"""Multi strategic games: a local strategic game at every node of a graph.

Each local pure profile yields an outcome and a successor node. A
non-deterministic profile fixes a strategy subset per ``(agent, node)`` and
induces, from every node, an infinite sequence of outcome sets. The sequence
is driven by the reachable node set ``N_k``, which lives in a finite space, so
it is eventually periodic and stored as a lasso.

An agent's best response at node ``n`` keeps the local choices of those full
strategies (one choice per node) whose induced sequence from ``n`` is
maximal for :func:`ndgame.order.seq_less`.
"""
from __future__ import annotations

import itertools
from collections.abc import Hashable, Mapping
from dataclasses import dataclass, field

from . import lattice
from .errors import CollapsedToBottom, EmptyCell, UnknownNode, ValidationError
from .lattice import BOTTOM, NdProfile, ProfileShape
from .order import EventuallyPeriodicSeq, Preference, seq_less


@dataclass(frozen=True)
class MultiGame:
    """Nodes, agents, local strategy sets and local transition tables.

    ``local_strategies[(node, agent)]`` lists the agent's choices at the
    node; ``transition[node]`` maps local profiles (tuples in ``agents``
    order) to ``(outcome, next_node)``. ``start`` is only used for display.
    """

    nodes: tuple
    agents: tuple
    local_strategies: Mapping
    transition: Mapping
    prefs: Mapping
    payoffs: Mapping | None = None
    name: str = "multigame"
    start: Hashable = None
    _shape: ProfileShape = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes, agents = tuple(self.nodes), tuple(self.agents)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "agents", agents)
        if not nodes:
            raise ValidationError("a multigame needs at least one node")
        if not agents:
            raise ValidationError("a multigame needs at least one agent")
        if len(set(nodes)) != len(nodes):
            raise ValidationError("duplicate node", identifier=nodes)
        if self.start is not None and self.start not in nodes:
            raise ValidationError(f"unknown start node {self.start!r}", identifier=self.start)
        local = {}
        for n in nodes:
            for a in agents:
                ss = tuple(self.local_strategies.get((n, a), ()))
                if not ss:
                    raise ValidationError(
                        f"agent {a!r} has no strategies at node {n!r}", identifier=(n, a)
                    )
                local[(n, a)] = ss
        object.__setattr__(self, "local_strategies", local)

        trans = {}
        outcomes = set()
        for n in nodes:
            if n not in self.transition:
                raise ValidationError(f"node {n!r} has no cells", identifier=n)
            table = dict(self.transition[n])
            expected = set(itertools.product(*(local[(n, a)] for a in agents)))
            for s in expected:
                if s not in table:
                    raise ValidationError(f"node {n!r}: missing cell {s!r}", identifier=s)
            for s, (oc, nxt) in table.items():
                if s not in expected:
                    raise ValidationError(f"node {n!r}: unknown profile {s!r}", identifier=s)
                if nxt not in nodes:
                    raise ValidationError(f"unknown node {nxt!r}", identifier=nxt)
                outcomes.add(oc)
            trans[n] = table
        object.__setattr__(self, "transition", trans)

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
            prefs[a] = p
        object.__setattr__(self, "prefs", prefs)
        object.__setattr__(
            self,
            "_shape",
            ProfileShape(
                tuple((a, n, frozenset(local[(n, a)])) for n in nodes for a in agents)
            ),
        )

    @classmethod
    def from_payoffs(cls, nodes, agents, local_strategies, cells: Mapping, name="multigame", start=None):
        """Numeric multigame from ``cells[node][profile] = (payoffs, next_node)``."""
        agents = tuple(agents)
        transition, vectors = {}, {}
        for n, table in cells.items():
            transition[n] = {}
            for profile, (vec, nxt) in table.items():
                profile = tuple(profile)
                vec = tuple(int(x) for x in vec)
                if len(vec) != len(agents):
                    raise ValidationError(
                        f"node {n!r}: cell {profile!r} needs {len(agents)} payoffs",
                        identifier=profile,
                    )
                oc = f"{n}:" + ",".join(map(str, profile))
                transition[n][profile] = (oc, nxt)
                vectors[oc] = vec
        prefs = {
            a: Preference.from_scores({oc: v[i] for oc, v in vectors.items()})
            for i, a in enumerate(agents)
        }
        return cls(nodes, agents, local_strategies, transition, prefs,
                   payoffs=vectors, name=name, start=start)

    @property
    def shape(self) -> ProfileShape:
        return self._shape

    @property
    def outcomes(self) -> frozenset:
        return frozenset(oc for t in self.transition.values() for oc, _ in t.values())


def shape_of(mg: MultiGame) -> ProfileShape:
    return mg.shape


def _check_node(mg: MultiGame, n):
    if n not in mg.transition:
        raise UnknownNode(f"unknown node {n!r}")


def local_step(mg: MultiGame, n, local) -> tuple:
    """Outcomes and successors reachable in one step at ``n``.

    ``local`` maps each agent to a non-empty subset of its choices at ``n``
    (or is a sequence of such subsets in agent order).
    """
    _check_node(mg, n)
    if isinstance(local, Mapping):
        cells = [local[a] for a in mg.agents]
    else:
        cells = list(local)
    for a, c in zip(mg.agents, cells):
        if not c:
            raise EmptyCell(f"agent {a!r} has an empty cell at node {n!r}")
    table = mg.transition[n]
    outs, succ = set(), set()
    for s in itertools.product(*cells):
        oc, nxt = table[s]
        outs.add(oc)
        succ.add(nxt)
    return frozenset(outs), frozenset(succ)


def _all_steps(mg: MultiGame, cells: Mapping) -> dict:
    """``local_step`` at every node for a map ``(agent, node) -> cell``."""
    return {
        n: local_step(mg, n, [cells[(a, n)] for a in mg.agents]) for n in mg.nodes
    }


def _seq_from(steps: dict, n) -> EventuallyPeriodicSeq:
    seen = {}
    states = []
    cur = frozenset([n])
    while cur not in seen:
        seen[cur] = len(states)
        states.append(frozenset().union(*(steps[m][0] for m in cur)))
        cur = frozenset().union(*(steps[m][1] for m in cur))
    return EventuallyPeriodicSeq(tuple(states), seen[cur]).canonical()


def induced_seq(mg: MultiGame, sigma: NdProfile, n) -> EventuallyPeriodicSeq:
    """Sequence of outcome sets reachable from ``n`` while playing within ``sigma``."""
    _check_node(mg, n)
    return _seq_from(_all_steps(mg, sigma.as_dict()), n)


def _opponent_cells(mg: MultiGame, a, gamma) -> dict:
    if isinstance(gamma, NdProfile):
        cells = gamma.as_dict()
    else:
        cells = {k: frozenset(v) for k, v in gamma.items()}
    out = {}
    for n in mg.nodes:
        for b in mg.agents:
            if b == a:
                continue
            c = cells.get((b, n))
            if not c:
                raise EmptyCell(f"agent {b!r} has no strategies at node {n!r}")
            out[(b, n)] = c
    return out


def agent_best_responses(mg: MultiGame, a, gamma) -> dict:
    """Best-response cell of ``a`` at every node against opponents' cells ``gamma``."""
    cells = _opponent_cells(mg, a, gamma)
    pref = mg.prefs[a]
    choices = [sorted(mg.local_strategies[(n, a)], key=str) for n in mg.nodes]
    seqs = {}
    for s in itertools.product(*choices):
        for n, x in zip(mg.nodes, s):
            cells[(a, n)] = (x,)
        steps = _all_steps(mg, cells)
        seqs[s] = [_seq_from(steps, n) for n in mg.nodes]

    result = {}
    for i, n in enumerate(mg.nodes):
        distinct = {q[i] for q in seqs.values()}
        maximal = {q for q in distinct if not any(seq_less(pref, q, r) for r in distinct)}
        result[n] = frozenset(s[i] for s, q in seqs.items() if q[i] in maximal)
    return result


def node_best_response(mg: MultiGame, a, gamma, n) -> frozenset:
    _check_node(mg, n)
    return agent_best_responses(mg, a, gamma)[n]


def br_operator_multi(mg: MultiGame):
    """Combined best response, memoised per agent on the opponents' cells."""
    shape = mg.shape
    memo = {}

    def F(sigma):
        if sigma is BOTTOM:
            return BOTTOM
        d = sigma.as_dict()
        out = {}
        for a in mg.agents:
            key = (a, tuple(c for (b, _), c in d.items() if b != a))
            if key not in memo:
                memo[key] = agent_best_responses(mg, a, d)
            for n, c in memo[key].items():
                out[(a, n)] = c
        if not all(out.values()):
            return BOTTOM
        return NdProfile.from_cells(shape, out)

    return F


def combined_br_multi(mg: MultiGame, sigma: NdProfile) -> NdProfile:
    return br_operator_multi(mg)(sigma)


def is_nd_equilibrium_multi(mg: MultiGame, sigma: NdProfile) -> bool:
    return lattice.leq(sigma, combined_br_multi(mg, sigma))


def solve_multi(mg: MultiGame):
    try:
        return lattice.iterate_prefixpoint(br_operator_multi(mg), lattice.top(mg.shape))
    except CollapsedToBottom as e:
        raise CollapsedToBottom(
            f"{mg.name}: sequence best response emptied a cell ({e}); "
            "check that every preference is a strict partial order",
            e.trace,
        ) from e


LOOP_NODE = "loop"


def embed_strategic(g) -> MultiGame:
    """One-node multigame whose every cell loops back to the node."""
    n = LOOP_NODE
    return MultiGame(
        nodes=(n,),
        agents=g.agents,
        local_strategies={(n, a): g.strategies[a] for a in g.agents},
        transition={n: {s: (oc, n) for s, oc in g.table.items()}},
        prefs=g.prefs,
        payoffs=g.payoffs,
        name=g.name,
        start=n,
    )
