"""Brute-force checks on small instances and the class-G experiment.

Everything here enumerates the whole profile lattice, so it only scales to
desk-sized games; :func:`enumerate_nd_profiles` refuses shapes whose lattice
exceeds ``cap``.
"""
from __future__ import annotations

import csv
import itertools
import random
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice
from .errors import CapExceeded, CollapsedToBottom
from .lattice import BOTTOM, NdProfile, ProfileShape
from .multigame import MultiGame, br_operator_multi, solve_multi
from .strategic import BRVariant, StrategicGame, br_operator, cartesian_union, shape_of, solve

DEFAULT_CAP = 10**6


def enumerate_nd_profiles(shape: ProfileShape, cap: int = DEFAULT_CAP) -> Iterator[NdProfile]:
    size = shape.lattice_size()
    if size > cap:
        raise CapExceeded(f"{size} profiles exceed the enumeration cap {cap}")
    return lattice.subprofiles(lattice.top(shape))


def _operator_and_shape(game, v):
    if isinstance(game, MultiGame):
        return br_operator_multi(game), game.shape
    return br_operator(game, v), shape_of(game)


def all_equilibria(game, v: BRVariant = BRVariant.FULL, cap: int = DEFAULT_CAP) -> set:
    """Every profile included in its combined best response.

    ``v`` is ignored for multigames, which have a single best response.
    """
    F, shape = _operator_and_shape(game, v)
    return {s for s in enumerate_nd_profiles(shape, cap) if lattice.leq(s, F(s))}


def union_all(profiles) -> NdProfile:
    it = iter(profiles)
    acc = next(it)
    for p in it:
        acc = cartesian_union(acc, p)
    return acc


@dataclass
class EquilibriumReport:
    game: str
    variant: str
    engine_result: object
    all_equilibria: set
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)


def verify_engine(game, v: BRVariant = BRVariant.FULL, cap: int = DEFAULT_CAP) -> EquilibriumReport:
    """Cross-check the solver against exhaustive enumeration.

    Monotone operators (``BR3``, ``BR4``, and the multigame best response)
    additionally get the greatest-equals-union and union-closure checks.
    """
    multi = isinstance(game, MultiGame)
    v = BRVariant(v)
    eqs = all_equilibria(game, v, cap)
    report = EquilibriumReport(
        game.name, "seq" if multi else v.value, BOTTOM, eqs
    )
    try:
        result, _ = solve_multi(game) if multi else solve(game, v)
    except CollapsedToBottom:
        report.checks.append(("engine succeeded", False))
        return report
    report.engine_result = result
    report.checks.append(("engine succeeded", True))
    report.checks.append(("engine result is an equilibrium", result in eqs))
    if multi or v in (BRVariant.BR3, BRVariant.BR4):
        report.checks.append(("engine result is the union of all equilibria",
                              bool(eqs) and result == union_all(eqs)))
        closed = all(cartesian_union(x, y) in eqs for x, y in itertools.combinations(eqs, 2))
        report.checks.append(("equilibria closed under cartesian union", closed))
    return report


# -- random instances ---------------------------------------------------------

def random_strategic_game(
    rng: random.Random, n_agents=(2, 3), n_strategies=(2, 3), payoffs=(0, 3), name="random"
) -> StrategicGame:
    k = rng.randint(*n_agents)
    agents = [f"a{i}" for i in range(k)]
    strategies = {a: [f"{a}s{j}" for j in range(rng.randint(*n_strategies))] for a in agents}
    cells = {
        s: tuple(rng.randint(*payoffs) for _ in agents)
        for s in itertools.product(*strategies.values())
    }
    return StrategicGame.from_payoffs(agents, strategies, cells, name=name)


def random_multi_game(
    rng: random.Random, n_nodes=(1, 3), n_strategies=(1, 2), n_agents=(2, 2), payoffs=(0, 3),
    name="random",
) -> MultiGame:
    nodes = [f"n{i}" for i in range(rng.randint(*n_nodes))]
    agents = [f"a{i}" for i in range(rng.randint(*n_agents))]
    local = {
        (n, a): [f"{a}{n}s{j}" for j in range(rng.randint(*n_strategies))]
        for n in nodes
        for a in agents
    }
    cells = {
        n: {
            s: (tuple(rng.randint(*payoffs) for _ in agents), rng.choice(nodes))
            for s in itertools.product(*(local[(n, a)] for a in agents))
        }
        for n in nodes
    }
    return MultiGame.from_payoffs(nodes, agents, local, cells, name=name)


# -- class G ------------------------------------------------------------------

CLASS_G_AGENTS = ("v", "h")
CLASS_G_STRATEGIES = {"v": ("v1", "v2"), "h": ("h1", "h2")}
CLASS_G_CELLS = (("v1", "h1"), ("v1", "h2"), ("v2", "h1"), ("v2", "h2"))


def class_g_game(signs) -> StrategicGame:
    """2x2 game from 8 signs: ``(p_v, p_h)`` for each cell in row-major order."""
    payoffs = {cell: (signs[2 * i], signs[2 * i + 1]) for i, cell in enumerate(CLASS_G_CELLS)}
    name = "g" + "".join("+" if x > 0 else "-" for x in signs)
    return StrategicGame.from_payoffs(CLASS_G_AGENTS, CLASS_G_STRATEGIES, payoffs, name=name)


@dataclass(frozen=True)
class ClassGRecord:
    signs: tuple
    equilibrium: NdProfile
    mean: dict


@dataclass(frozen=True)
class ClassGStats:
    records: tuple
    mean: dict
    baseline: dict


def _mean_over(g: StrategicGame, profiles, a) -> Fraction:
    profiles = list(profiles)
    return Fraction(sum(g.payoff(s, a) for s in profiles), len(profiles))


def class_g_mean(variant: BRVariant = BRVariant.FULL) -> ClassGStats:
    """Average equilibrium payoff per agent over all 256 sign games."""
    records = []
    baseline = {a: Fraction(0) for a in CLASS_G_AGENTS}
    for signs in itertools.product((-1, 1), repeat=8):
        g = class_g_game(signs)
        eq, _ = solve(g, variant)
        inside = list(itertools.product(*(sorted(eq.cell(a)) for a in g.agents)))
        everywhere = list(g.table)
        records.append(
            ClassGRecord(signs, eq, {a: _mean_over(g, inside, a) for a in g.agents})
        )
        for a in g.agents:
            baseline[a] += _mean_over(g, everywhere, a)
    n = len(records)
    mean = {a: sum((r.mean[a] for r in records), Fraction(0)) / n for a in CLASS_G_AGENTS}
    baseline = {a: b / n for a, b in baseline.items()}
    return ClassGStats(tuple(records), mean, baseline)


def write_class_g_csv(stats: ClassGStats, fh) -> None:
    """One row per game, then a summary row; no header."""
    w = csv.writer(fh, lineterminator="\n")
    for r in stats.records:
        w.writerow(
            [f"{x:+d}" for x in r.signs]
            + [" ".join(sorted(r.equilibrium.cell(a))) for a in CLASS_G_AGENTS]
            + [str(r.mean[a]) for a in CLASS_G_AGENTS]
        )
    w.writerow(["summary"] + [""] * 9 + [str(stats.mean[a]) for a in CLASS_G_AGENTS])
