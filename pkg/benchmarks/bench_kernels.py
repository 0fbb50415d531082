"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import itertools
import random
import timeit
from fractions import Fraction

from ordfree._kernels import _pure
from ordfree.builtin import dirprod_corpus
from ordfree.dirprod import FinSupportElement, _flatten
from ordfree.freegroup import EXAMPLE_F_PATTERN

try:
    from ordfree._kernels import _speedups
except ImportError:
    _speedups = None


def pl_workload(mod, table, points):
    def run():
        for n, d in points:
            mod.pl_apply(table, n, d)

    return run


def relation_workload(mod, letter_sets, max_len):
    def run():
        for letters in letter_sets:
            mod.search_relation(letters, max_len)

    return run


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=20000)
    args = ap.parse_args()

    rng = random.Random(0)
    table = EXAMPLE_F_PATTERN._fwd
    pts = []
    for _ in range(args.points):
        x = Fraction(rng.randrange(0, 4 * 997), rng.randrange(1, 998))
        x = x - 4 * (x // 4)
        pts.append((x.numerator, x.denominator))

    corpus = dirprod_corpus()
    subsets = [_flatten(list(s)) for s in itertools.combinations(corpus, 3)]
    # 5-cycles on disjoint coordinates of Sym(5) x Sym(5): no relation before length 4,
    # so length 3 is an exhaustive miss
    c5 = (1, 2, 3, 4, 0)
    miss = [_flatten([FinSupportElement({0: c5}), FinSupportElement({1: c5})])]

    cases = [
        ("pl_apply x%d" % args.points, lambda m: pl_workload(m, table, pts)),
        ("search_relation corpus (20 subsets, len<=8)", lambda m: relation_workload(m, subsets, 8)),
        ("search_relation exhaustive miss (len<=3) x200", lambda m: relation_workload(m, miss * 200, 3)),
    ]
    print(f"{'kernel':48s} {'pure [s]':>10s} {'compiled [s]':>13s} {'speedup':>8s}")
    for name, make in cases:
        tp = min(timeit.repeat(make(_pure), number=1, repeat=args.repeat))
        if _speedups is None:
            print(f"{name:48s} {tp:10.4f} {'n/a':>13s} {'n/a':>8s}")
            continue
        tc = min(timeit.repeat(make(_speedups), number=1, repeat=args.repeat))
        print(f"{name:48s} {tp:10.4f} {tc:13.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
