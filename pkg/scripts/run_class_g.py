"""Average equilibrium payoff over the 256 two-by-two sign games, per variant.

Also breaks the FULL mean down by agent v's payoff matrix.
"""
import argparse
from collections import defaultdict
from fractions import Fraction

from ndgame import oracle
from ndgame.strategic import BRVariant


def by_v_matrix(stats):
    groups = defaultdict(list)
    for r in stats.records:
        groups[r.signs[0::2]].append(r.mean["v"])
    return {k: sum(v, Fraction(0)) / len(v) for k, v in sorted(groups.items())}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--csv", help="write the FULL per-game table here")
    p.add_argument("--breakdown", action="store_true", help="print the mean per v-matrix")
    args = p.parse_args(argv)

    for v in BRVariant:
        stats = oracle.class_g_mean(v)
        print(f"{v.value:5s} mean(v) = {stats.mean['v']}  mean(h) = {stats.mean['h']}"
              f"  baseline = {stats.baseline['v']}")
    full = oracle.class_g_mean(BRVariant.FULL)
    if args.breakdown:
        print("\nv payoffs (v1h1, v1h2, v2h1, v2h2) -> mean(v) under FULL")
        for k, m in by_v_matrix(full).items():
            print(" ".join(f"{x:+d}" for x in k), "->", m)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            oracle.write_class_g_csv(full, fh)
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
