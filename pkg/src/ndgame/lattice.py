"""Non-deterministic profiles and the pre-fixed-point engine.

Profiles are products of non-empty strategy subsets, one cell per
``(agent, node)`` axis, ordered by cell-wise inclusion. Adjoining the
sentinel :data:`BOTTOM` makes the set a meet semi-lattice whose meet is
cell-wise intersection.

:func:`iterate_prefixpoint` runs ``x <- meet(x, F(x))`` until nothing changes.
Every non-final round removes at least one strategy, so the number of rounds
is bounded by one plus the total strategy count.
"""
from __future__ import annotations

import itertools
import math
import random
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .errors import CapExceeded, ChainError, CollapsedToBottom, EmptyCell, ShapeMismatch

AxisKey = tuple  # (agent, node); node is None for strategic games


@dataclass(frozen=True)
class Axis:
    agent: Hashable
    node: Hashable
    universe: frozenset

    @property
    def key(self) -> AxisKey:
        return (self.agent, self.node)


@dataclass(frozen=True)
class ProfileShape:
    axes: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        axes = tuple(
            a if isinstance(a, Axis) else Axis(a[0], a[1], frozenset(a[2]))
            for a in self.axes
        )
        object.__setattr__(self, "axes", axes)
        index = {}
        for i, ax in enumerate(axes):
            if not ax.universe:
                raise EmptyCell(f"axis {ax.key!r} has an empty strategy universe")
            if ax.key in index:
                raise ShapeMismatch(f"duplicate axis {ax.key!r}")
            index[ax.key] = i
        object.__setattr__(self, "_index", index)

    def __hash__(self):
        return hash(self.axes)

    def position(self, agent, node=None) -> int:
        try:
            return self._index[(agent, node)]
        except KeyError:
            raise ShapeMismatch(f"no axis for agent {agent!r} at node {node!r}") from None

    @property
    def keys(self) -> list:
        return [ax.key for ax in self.axes]

    def total_strategies(self) -> int:
        return sum(len(ax.universe) for ax in self.axes)

    def lattice_size(self) -> int:
        """Number of non-bottom profiles."""
        return math.prod(2 ** len(ax.universe) - 1 for ax in self.axes)


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __reduce__(self):
        return (_Bottom, ())


BOTTOM = _Bottom()


@dataclass(frozen=True)
class NdProfile:
    """One non-empty strategy subset per axis of ``shape``."""

    shape: ProfileShape
    cells: tuple

    def __post_init__(self):
        cells = tuple(frozenset(c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        if len(cells) != len(self.shape.axes):
            raise ShapeMismatch(
                f"{len(cells)} cells for a shape with {len(self.shape.axes)} axes"
            )
        for ax, c in zip(self.shape.axes, cells):
            if not c:
                raise EmptyCell(f"cell {ax.key!r} is empty")
            if not c <= ax.universe:
                extra = sorted(map(str, c - ax.universe))
                raise ShapeMismatch(f"cell {ax.key!r} has unknown strategies {extra}")

    @classmethod
    def from_cells(cls, shape: ProfileShape, cells: Mapping) -> NdProfile:
        """Build from ``{(agent, node): strategies}``; strategic games may key by agent."""
        out = []
        for ax in shape.axes:
            if ax.key in cells:
                out.append(cells[ax.key])
            elif ax.node is None and ax.agent in cells:
                out.append(cells[ax.agent])
            else:
                raise ShapeMismatch(f"missing cell for axis {ax.key!r}")
        return cls(shape, tuple(out))

    def cell(self, agent, node=None) -> frozenset:
        return self.cells[self.shape.position(agent, node)]

    def as_dict(self) -> dict:
        return {ax.key: c for ax, c in zip(self.shape.axes, self.cells)}

    def with_cell(self, agent, node, cell) -> NdProfile:
        i = self.shape.position(agent, node)
        cells = list(self.cells)
        cells[i] = cell
        return NdProfile(self.shape, tuple(cells))

    def pure_count(self) -> int:
        return math.prod(len(c) for c in self.cells)

    def __repr__(self):
        parts = []
        for ax, c in zip(self.shape.axes, self.cells):
            name = str(ax.agent) if ax.node is None else f"{ax.node}/{ax.agent}"
            parts.append(f"{name}={{{','.join(sorted(map(str, c)))}}}")
        return f"NdProfile({' '.join(parts)})"


MultiNdProfile = NdProfile


@dataclass
class SolveTrace:
    """Snapshots of the iteration; ``removed[i]`` separates ``steps[i]`` and ``steps[i+1]``."""

    steps: list = field(default_factory=list)
    removed: list = field(default_factory=list)

    @property
    def rounds(self) -> list:
        """Removals of the rounds that changed something."""
        return [r for r in self.removed if r]

    @property
    def iterations(self) -> int:
        return len(self.removed)


def top(shape: ProfileShape) -> NdProfile:
    return NdProfile(shape, tuple(ax.universe for ax in shape.axes))


def _same_shape(x, y):
    if x.shape is not y.shape and x.shape != y.shape:
        raise ShapeMismatch("profiles have different shapes")


def meet(x, y):
    if x is BOTTOM or y is BOTTOM:
        return BOTTOM
    _same_shape(x, y)
    cells = tuple(a & b for a, b in zip(x.cells, y.cells))
    if not all(cells):
        return BOTTOM
    return NdProfile(x.shape, cells)


def leq(x, y) -> bool:
    if x is BOTTOM:
        return True
    if y is BOTTOM:
        return False
    _same_shape(x, y)
    return all(a <= b for a, b in zip(x.cells, y.cells))


def removed_between(x: NdProfile, y: NdProfile) -> frozenset:
    """``((agent, node), strategy)`` pairs present in ``x`` but not in ``y``."""
    return frozenset(
        (ax.key, s)
        for ax, a, b in zip(x.shape.axes, x.cells, y.cells)
        for s in a - b
    )


def iterate_prefixpoint(F: Callable, x0: NdProfile):
    """Iterate ``x <- meet(x, F(x))`` from ``x0`` until stable.

    Returns ``(result, trace)`` with ``leq(result, F(result))``. Raises
    :class:`CollapsedToBottom` if an intermediate meet is empty; the
    exception carries the trace up to that point.
    """
    if x0 is BOTTOM:
        raise ValueError("iteration must start from a non-bottom profile")
    trace = SolveTrace(steps=[x0])
    x = x0
    while True:
        y = meet(x, F(x))
        if y is BOTTOM:
            raise CollapsedToBottom(
                f"iteration reached bottom after {trace.iterations + 1} rounds", trace
            )
        trace.removed.append(removed_between(x, y))
        trace.steps.append(y)
        if y == x:
            return x, trace
        x = y


def _nonempty_subsets(universe) -> list:
    items = sorted(universe, key=str)
    return [
        frozenset(c)
        for r in range(1, len(items) + 1)
        for c in itertools.combinations(items, r)
    ]


def subprofiles(x: NdProfile) -> Iterator[NdProfile]:
    """Every non-bottom profile below ``x``, in a fixed order."""
    for cells in itertools.product(*(_nonempty_subsets(c) for c in x.cells)):
        yield NdProfile(x.shape, cells)


def random_subprofile(x: NdProfile, rng: random.Random) -> NdProfile:
    cells = []
    for c in x.cells:
        items = sorted(c, key=str)
        k = rng.randint(1, len(items))
        cells.append(frozenset(rng.sample(items, k)))
    return NdProfile(x.shape, tuple(cells))


def chains_below(x: NdProfile, limit: int | None = None) -> Iterator[list]:
    """All strictly ascending chains ``x_1 < ... < x_n <= x`` with ``n >= 1``.

    Chains with repeated elements give the same meets, so they are skipped.
    Raises :class:`CapExceeded` once more than ``limit`` chains were produced.
    """
    elems = list(subprofiles(x))
    above = {e: [f for f in elems if f != e and leq(e, f)] for e in elems}
    count = 0

    def extend(chain):
        nonlocal count
        count += 1
        if limit is not None and count > limit:
            raise CapExceeded(f"more than {limit} chains below {x!r}")
        yield chain
        for f in above[chain[-1]]:
            yield from extend(chain + [f])

    for e in elems:
        yield from extend([e])


def sample_chains(x: NdProfile, rng: random.Random, count: int, max_len: int = 4) -> list:
    """Random ascending chains ending below ``x``."""
    chains = []
    for _ in range(count):
        cur = random_subprofile(x, rng)
        chain = [cur]
        for _ in range(rng.randint(0, max_len - 1)):
            cur = random_subprofile(cur, rng)
            chain.append(cur)
        chains.append(chain[::-1])
    return chains


def meeting_point_chains(
    x: NdProfile, rng: random.Random | None = None, limit: int = 10**4, samples: int = 200
) -> list:
    """Exhaustive chain list when it has at most ``limit`` entries, else a sample."""
    try:
        return list(chains_below(x, limit))
    except CapExceeded:
        return sample_chains(x, rng or random.Random(0), samples)


def check_meeting_point(F: Callable, x, chains: Iterable) -> bool:
    """Check ``meet(F(x_1), ..., F(x_n), x) != BOTTOM`` on each supplied chain."""
    if x is BOTTOM:
        return False
    for chain in chains:
        chain = list(chain)
        if not chain:
            raise ChainError("empty chain")
        if any(c is BOTTOM for c in chain):
            raise ChainError("chains must not contain bottom")
        for lo, hi in zip(chain, chain[1:]):
            if not leq(lo, hi):
                raise ChainError("chain is not ascending")
        if not leq(chain[-1], x):
            raise ChainError("chain does not lie below the point")
        acc = x
        for c in chain:
            acc = meet(acc, F(c))
            if acc is BOTTOM:
                return False
    return True
