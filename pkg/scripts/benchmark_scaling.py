#!/usr/bin/env python3
"""Time the floating-point rank-distribution path on caterpillar trees.

The walk from a vertex to the root folds in one sibling block per step, so
the cost for the deepest vertex of a caterpillar with k interior vertices
grows quadratically in k.  This script prints measured times and the
step-to-step ratios (quadratic growth predicts ratio 4 when sizes double).

Usage:
    python3 scripts/benchmark_scaling.py
    python3 scripts/benchmark_scaling.py --sizes 500 1000 2000 4000 --repeat 5
"""

import argparse
import time

from rankdate import parse_newick, rank_probabilities_float


def caterpillar(n_leaves: int) -> str:
    text = "(a1,a2)"
    for k in range(3, n_leaves + 1):
        text = f"({text},a{k})"
    return text + ";"


def best_time(interior: int, repeat: int) -> float:
    tree = parse_newick(caterpillar(interior + 1))
    deepest = max(tree.interior_vertices(), key=lambda v: tree.depth[v])
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        probs = rank_probabilities_float(tree, deepest)
        best = min(best, time.perf_counter() - start)
    assert abs(sum(probs) - 1.0) < 1e-9
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes", type=int, nargs="+", default=[250, 500, 1000, 2000],
        metavar="K", help="interior vertex counts to benchmark",
    )
    parser.add_argument("--repeat", type=int, default=3, help="runs per size (best kept)")
    args = parser.parse_args()

    print(f"{'interior':>10} {'seconds':>10} {'ratio':>8}")
    previous = None
    for size in args.sizes:
        seconds = best_time(size, args.repeat)
        ratio = "" if previous is None else f"{seconds / previous:8.2f}"
        print(f"{size:>10} {seconds:>10.4f} {ratio:>8}")
        previous = seconds


if __name__ == "__main__":
    main()
