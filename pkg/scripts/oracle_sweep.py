"""Cross-check the solver against brute-force enumeration on random games."""
import argparse
import random
import time
from collections import Counter

from ndgame import oracle
from ndgame.strategic import BRVariant


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--strategic", type=int, default=200, help="number of strategic games")
    p.add_argument("--multi", type=int, default=100, help="number of multigames")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = random.Random(args.seed)
    failures = Counter()
    runs = Counter()
    start = time.perf_counter()
    for i in range(args.strategic):
        g = oracle.random_strategic_game(rng, name=f"s{i}")
        for v in BRVariant:
            runs[v.value] += 1
            report = oracle.verify_engine(g, v)
            if not report.ok:
                failures[v.value] += 1
                print(f"FAIL {g.name} {v.value}: {report.checks}")
    for i in range(args.multi):
        mg = oracle.random_multi_game(rng, name=f"m{i}")
        runs["seq"] += 1
        report = oracle.verify_engine(mg)
        if not report.ok:
            failures["seq"] += 1
            print(f"FAIL {mg.name}: {report.checks}")
    elapsed = time.perf_counter() - start
    for k in runs:
        print(f"{k:5s} {runs[k]:4d} runs, {failures[k]} failures")
    print(f"{elapsed:.1f} s")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
