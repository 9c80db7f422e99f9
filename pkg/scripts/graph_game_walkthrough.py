"""Print the elimination rounds of a corpus game, one profile per round."""
import argparse

from ndgame import corpus
from ndgame.cli import format_profile, format_trace
from ndgame.multigame import MultiGame, solve_multi
from ndgame.strategic import BRVariant, solve


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("name", nargs="?", default="graph_game.ndmg", choices=corpus.names())
    p.add_argument("--br", default="full", choices=[v.value for v in BRVariant])
    args = p.parse_args(argv)

    g = corpus.load(args.name).game
    if isinstance(g, MultiGame):
        _, trace = solve_multi(g)
    else:
        _, trace = solve(g, BRVariant.parse(args.br))
    lines = format_trace(g, trace).splitlines()
    for i, step in enumerate(trace.steps[:-1]):
        print(f"-- before round {i + 1}")
        print(format_profile(g, step))
        print(lines[i])
    print("-- equilibrium")
    print(format_profile(g, trace.steps[-1]))


if __name__ == "__main__":
    main()
