"""Command-line entry points.

Exit codes: 0 ok, 1 a check failed, 2 parse/validation error, 3 enumeration
cap exceeded, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import dsl, oracle
from .errors import CapExceeded, CollapsedToBottom, KindError, NdGameError
from .multigame import MultiGame, solve_multi
from .strategic import BRVariant, is_strict_nd_equilibrium, pure_nash_profiles, solve

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_CAP, EXIT_IO = 0, 1, 2, 3, 4
CLASS_G_TARGET = Fraction(3, 8)


def natural_key(x):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", str(x))]


def _set(cell) -> str:
    return "{" + ",".join(sorted(map(str, cell), key=natural_key)) + "}"


def format_profile(game, sigma) -> str:
    if isinstance(game, MultiGame):
        return "\n".join(
            f"{n}  " + "  ".join(f"{a}: {_set(sigma.cell(a, n))}" for a in game.agents)
            for n in game.nodes
        )
    return "  ".join(f"{a}: {_set(sigma.cell(a))}" for a in game.agents)


def _removal_order(game, removed):
    agents = list(game.agents)
    nodes = list(getattr(game, "nodes", [None]))
    return sorted(
        removed,
        key=lambda r: (nodes.index(r[0][1]), agents.index(r[0][0]), natural_key(r[1])),
    )


def format_trace(game, trace) -> str:
    """One line per round; the last line marks the fixpoint."""
    lines = []
    for i, removed in enumerate(trace.removed, start=1):
        if not removed:
            lines.append(f"round {i}: fixpoint")
            continue
        items = []
        for (agent, node), s in _removal_order(game, removed):
            items.append(f"{agent}:{s}" if node is None else f"{node}/{agent}:{s}")
        lines.append(f"round {i}: removed " + " ".join(items))
    return "\n".join(lines)


def _json_profile(game, sigma):
    def cell(a, n=None):
        return sorted(map(str, sigma.cell(a, n)), key=natural_key)

    if isinstance(game, MultiGame):
        return {n: {a: cell(a, n) for a in game.agents} for n in game.nodes}
    return {a: cell(a) for a in game.agents}


def _json_rounds(game, trace):
    return [
        [
            {"agent": a, "strategy": s} if n is None else {"agent": a, "node": n, "strategy": s}
            for (a, n), s in _removal_order(game, removed)
        ]
        for removed in trace.removed
    ]


def _load(path):
    return dsl.load(path)


def _fail(msg, code):
    print(f"error: {msg}", file=sys.stderr)
    return code


def cmd_solve(args) -> int:
    doc = _load(args.file)
    g = doc.game
    multi = isinstance(g, MultiGame)
    if multi and args.br not in (None, "full"):
        raise KindError("multigames have a single best response; drop --br")
    v = BRVariant.parse(args.br or "full")
    try:
        sigma, trace = solve_multi(g) if multi else solve(g, v)
    except CollapsedToBottom as e:
        return _fail(str(e), EXIT_CHECK)
    if args.json:
        out = {
            "game": doc.name,
            "kind": doc.kind,
            "variant": "seq" if multi else v.value,
            "equilibrium": _json_profile(g, sigma),
            "iterations": trace.iterations,
        }
        if not multi:
            out["strict"] = is_strict_nd_equilibrium(g, sigma, v)
        if args.trace:
            out["rounds"] = _json_rounds(g, trace)
        print(json.dumps(out, sort_keys=True, indent=2))
        return EXIT_OK
    if args.trace:
        print(format_trace(g, trace))
    print(format_profile(g, sigma))
    return EXIT_OK


def cmd_nash(args) -> int:
    doc = _load(args.file)
    if doc.kind != dsl.STRATEGIC:
        raise KindError("nash needs a strategic game, not a multigame")
    found = pure_nash_profiles(doc.game)
    if not found:
        print("none")
    for s in found:
        print("(" + ",".join(s) + ")")
    return EXIT_OK


def cmd_oracle(args) -> int:
    doc = _load(args.file)
    g = doc.game
    if isinstance(g, MultiGame) and args.br not in (None, "full"):
        raise KindError("multigames have a single best response; drop --br")
    v = BRVariant.parse(args.br or "full")
    report = oracle.verify_engine(g, v, cap=args.cap)
    print(f"game {report.game}  variant {report.variant}")
    print(f"equilibria: {len(report.all_equilibria)}")
    if report.engine_result is not oracle.BOTTOM:
        print("engine:\n" + format_profile(g, report.engine_result))
    for name, passed in report.checks:
        print(f"[{'pass' if passed else 'FAIL'}] {name}")
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_classg(args) -> int:
    v = BRVariant.parse(args.br)
    stats = oracle.class_g_mean(v)
    agents = oracle.CLASS_G_AGENTS
    print(", ".join(f"mean({a}) = {stats.mean[a]}" for a in agents))
    print(", ".join(f"baseline({a}) = {stats.baseline[a]}" for a in agents))
    if args.csv:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                oracle.write_class_g_csv(stats, fh)
        except OSError as e:
            return _fail(str(e), EXIT_IO)
    ok = all(stats.mean[a] == CLASS_G_TARGET for a in agents)
    return EXIT_OK if ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndgame", description="Non-deterministic equilibria of strategic games and multigames."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    variants = [v.value for v in BRVariant]

    p = sub.add_parser("solve", help="compute an nd equilibrium")
    p.add_argument("file")
    p.add_argument("--br", choices=variants, default=None,
                   help="best-response variant for strategic games (default: full)")
    p.add_argument("--trace", action="store_true", help="print each round's eliminations")
    p.add_argument("--json", action="store_true", help="emit a JSON document")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("nash", help="list pure Nash equilibria")
    p.add_argument("file")
    p.set_defaults(func=cmd_nash)

    p = sub.add_parser("oracle", help="cross-check the solver by enumeration")
    p.add_argument("file")
    p.add_argument("--br", choices=variants, default=None)
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP,
                   help="maximum number of profiles to enumerate")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("classg", help="average equilibrium payoff over the 256 sign games")
    p.add_argument("--csv", metavar="PATH", help="write one row per game")
    p.add_argument("--br", choices=variants, default="full")
    p.set_defaults(func=cmd_classg)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as e:
        return _fail(str(e), EXIT_CAP)
    except OSError as e:
        return _fail(str(e), EXIT_IO)
    except NdGameError as e:
        return _fail(str(e), EXIT_INPUT)
