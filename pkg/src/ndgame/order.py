"""Preferences over outcomes and their extensions.

A :class:`Preference` is a strict partial order over opaque outcome
identifiers, optionally paired with an indifference relation: outcomes the
agent considers interchangeable (numeric games mint one outcome per cell, but
an agent only sees its own payoff coordinate). The weak relation used by the
function extension is ``x == y or x ~ y or x < y``.

The extensions implemented here:

* :func:`fn_less`    -- pointwise order on functions restricted to a context set,
* :func:`set_less`   -- all-pairs strict order on non-empty outcome sets,
* :func:`seq_less`   -- position-wise ``set_less`` on eventually periodic sequences.
"""
from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .errors import (
    ChainError,
    CycleError,
    EmptyRestriction,
    EmptySet,
    NdGameError,
    UnknownOutcome,
)

OutcomeId = Hashable


@dataclass(frozen=True)
class Preference:
    """Transitively closed strict relation over ``domain``.

    Build through :func:`validate_preference` or :meth:`from_scores`; the
    constructor trusts its input.
    """

    domain: frozenset
    relation: frozenset
    indifference: frozenset = field(default=frozenset())

    @classmethod
    def from_scores(cls, scores: Mapping[OutcomeId, int]) -> Preference:
        """Order outcomes by an integer label; equal labels are indifferent."""
        items = list(scores.items())
        rel = set()
        ind = set()
        for x, sx in items:
            for y, sy in items:
                if x == y:
                    continue
                if sx < sy:
                    rel.add((x, y))
                elif sx == sy:
                    ind.add((x, y))
        return cls(frozenset(scores), frozenset(rel), frozenset(ind))

    @classmethod
    def empty(cls, domain: Iterable[OutcomeId]) -> Preference:
        return cls(frozenset(domain), frozenset())

    def restrict(self, domain: Iterable[OutcomeId]) -> Preference:
        dom = frozenset(domain)
        return Preference(
            dom,
            frozenset(p for p in self.relation if p[0] in dom and p[1] in dom),
            frozenset(p for p in self.indifference if p[0] in dom and p[1] in dom),
        )


def _closure(succ: dict) -> dict:
    """Warshall closure of an adjacency map (mutates and returns ``succ``)."""
    nodes = list(succ)
    for k in nodes:
        for i in nodes:
            if k in succ[i]:
                succ[i] |= succ[k]
    return succ


def validate_preference(
    pairs: Iterable[tuple[OutcomeId, OutcomeId]],
    domain: Iterable[OutcomeId],
    indifferent: Iterable[tuple[OutcomeId, OutcomeId]] = (),
) -> Preference:
    """Close ``pairs`` transitively and check the result is irreflexive.

    ``indifferent`` pairs are closed into an equivalence first and the strict
    relation is made compatible with it, so ``x ~ x'`` and ``x < y`` give
    ``x' < y``. Raises :class:`CycleError` when some outcome ends up strictly
    below itself (or below an outcome it is indifferent to).
    """
    dom = frozenset(domain)
    pairs = list(pairs)
    indifferent = list(indifferent)
    for x, y in pairs + indifferent:
        for z in (x, y):
            if z not in dom:
                raise UnknownOutcome(f"outcome {z!r} is not in the preference domain")

    # equivalence classes of the indifference relation
    cls_of = {x: frozenset([x]) for x in dom}
    for x, y in indifferent:
        merged = cls_of[x] | cls_of[y]
        for z in merged:
            cls_of[z] = merged
    classes = set(cls_of.values())

    succ = {c: set() for c in classes}
    for x, y in pairs:
        succ[cls_of[x]].add(cls_of[y])
    _closure(succ)
    for c in classes:
        if c in succ[c]:
            raise CycleError(
                f"preference cycle through {sorted(map(str, c))[0]!r}"
            )

    rel = frozenset(
        (x, y) for x in dom for cy in succ[cls_of[x]] for y in cy
    )
    ind = frozenset((x, y) for x in dom for y in cls_of[x] if x != y)
    return Preference(dom, rel, ind)


def _check_known(pref: Preference, *xs):
    for x in xs:
        if x not in pref.domain:
            raise UnknownOutcome(f"outcome {x!r} is not in the preference domain")


def prefers(pref: Preference, x: OutcomeId, y: OutcomeId) -> bool:
    """True when ``y`` is strictly preferred to ``x``."""
    _check_known(pref, x, y)
    return (x, y) in pref.relation


def weakly_prefers(pref: Preference, x: OutcomeId, y: OutcomeId) -> bool:
    """Reflexive closure of :func:`prefers`, modulo indifference."""
    _check_known(pref, x, y)
    return x == y or (x, y) in pref.relation or (x, y) in pref.indifference


def equivalent(pref: Preference, x: OutcomeId, y: OutcomeId) -> bool:
    return x == y or (x, y) in pref.indifference


class OutcomeFunction:
    """A finite total map from contexts to outcomes.

    ``label`` names the strategy the function was read from; it only serves
    to order functions deterministically.
    """

    __slots__ = ("values", "label", "_hash")

    def __init__(self, values: Mapping[Hashable, OutcomeId], label: Hashable = None):
        self.values = dict(values)
        self.label = label
        self._hash = hash(frozenset(self.values.items()))

    @property
    def domain(self) -> frozenset:
        return frozenset(self.values)

    def __call__(self, x):
        return self.values[x]

    def __eq__(self, other):
        if not isinstance(other, OutcomeFunction):
            return NotImplemented
        return self.values == other.values

    def __hash__(self):
        return self._hash

    def __repr__(self):
        name = "" if self.label is None else f"{self.label!r}: "
        return f"OutcomeFunction({name}{self.values!r})"


def fn_less(
    pref: Preference, f: OutcomeFunction, g: OutcomeFunction, restrict: Iterable
) -> bool:
    """``f`` below ``g`` on ``restrict``: weakly everywhere, strictly somewhere."""
    restrict = list(restrict)
    if not restrict:
        raise EmptyRestriction("restriction set must be non-empty")
    rel, ind = pref.relation, pref.indifference
    strict = False
    for x in restrict:
        a, b = f(x), g(x)
        if (a, b) in rel:
            strict = True
        elif not (a == b or (a, b) in ind):
            return False
    return strict


def _fn_key(f: OutcomeFunction):
    return (f.label is None, str(f.label), sorted(map(repr, f.values.items())))


def _first_maximal(pref, pool, restrict):
    for f in pool:
        if not any(fn_less(pref, f, g, restrict) for g in pool):
            return f
    # unreachable for strict partial orders on a finite pool
    raise CycleError("no maximal element; preference is not a strict partial order")


def maximal_under_chain(
    candidates: Iterable[OutcomeFunction],
    chain: Sequence[Iterable],
    pref: Preference,
) -> OutcomeFunction:
    """Pick a function maximal for every extended order along ``chain``.

    Follows the inductive construction: take a maximal element for the
    smallest context set, then repeatedly re-select, among the candidates
    that agree with the current pick on the previous set, a maximal element
    for the next one. Ties go to the smallest label.
    """
    pool = sorted(set(candidates), key=_fn_key)
    if not pool:
        raise EmptySet("candidate set must be non-empty")
    chain = [frozenset(a) for a in chain]
    if not chain or not chain[0]:
        raise ChainError("chain must start with a non-empty context set")
    for smaller, larger in zip(chain, chain[1:]):
        if not smaller <= larger:
            raise ChainError("context sets must be ordered by inclusion")
    common = frozenset.intersection(*(f.domain for f in pool))
    if not chain[-1] <= common:
        raise ChainError("chain leaves the common domain of the candidates")

    pick = _first_maximal(pref, pool, chain[0])
    for prev, cur in zip(chain, chain[1:]):
        agree = [
            g for g in pool if all(equivalent(pref, g(x), pick(x)) for x in prev)
        ]
        pick = _first_maximal(pref, agree, cur)
    return pick


def set_less(pref: Preference, xs: Iterable[OutcomeId], ys: Iterable[OutcomeId]) -> bool:
    """Every element of ``xs`` is strictly below every element of ``ys``."""
    xs, ys = list(xs), list(ys)
    if not xs or not ys:
        raise EmptySet("set comparison needs non-empty sets")
    rel = pref.relation
    return all((x, y) in rel for x in xs for y in ys)


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    """Infinite sequence of outcome sets stored as a lasso.

    Position ``k >= len(states)`` repeats the cycle ``states[cycle_start:]``.
    """

    states: tuple
    cycle_start: int = 0

    def __post_init__(self):
        states = tuple(frozenset(s) for s in self.states)
        object.__setattr__(self, "states", states)
        if not 0 <= self.cycle_start < len(states):
            raise NdGameError(
                f"cycle_start {self.cycle_start} outside 0..{len(states) - 1}"
            )
        if any(not s for s in states):
            raise EmptySet("sequence positions must be non-empty")

    @property
    def period(self) -> int:
        return len(self.states) - self.cycle_start

    def at(self, k: int) -> frozenset:
        n = len(self.states)
        if k >= n:
            k = self.cycle_start + (k - self.cycle_start) % self.period
        return self.states[k]

    def unroll(self, n: int) -> list:
        return [self.at(k) for k in range(n)]

    def next_index(self, i: int) -> int:
        return i + 1 if i + 1 < len(self.states) else self.cycle_start

    def canonical(self) -> EventuallyPeriodicSeq:
        """Same sequence with minimal period, then minimal cycle start."""
        prefix = list(self.states[: self.cycle_start])
        cycle = list(self.states[self.cycle_start :])
        p = len(cycle)
        for d in range(1, p + 1):
            if p % d == 0 and all(cycle[i] == cycle[i % d] for i in range(p)):
                cycle = cycle[:d]
                break
        while prefix and prefix[-1] == cycle[-1]:
            cycle = [prefix.pop()] + cycle[:-1]
        return EventuallyPeriodicSeq(tuple(prefix + cycle), len(prefix))


def seq_less(pref: Preference, s: EventuallyPeriodicSeq, t: EventuallyPeriodicSeq) -> bool:
    """``set_less`` at every position.

    Walks the joint index pair until it repeats; the pair state space is
    finite so this visits every distinct pair of positions exactly once.
    """
    seen = set()
    i = j = 0
    while (i, j) not in seen:
        seen.add((i, j))
        if not set_less(pref, s.states[i], t.states[j]):
            return False
        i, j = s.next_index(i), t.next_index(j)
    return True
