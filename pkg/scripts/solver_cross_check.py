#!/usr/bin/env python3
"""Cross-validate the flow solver against the exhaustive oracle and the
greedy star rule on random instances.

Example:
    python scripts/solver_cross_check.py --instances 1000 --seed 7
"""

from __future__ import annotations

import argparse
import random
import sys
import time

from matchcore import brute_force_matching, greedy_star_matching, max_weight_b_matching
from matchcore.generators import random_instance, random_star


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=500)
    parser.add_argument("--stars", type=int, default=500)
    parser.add_argument("--max-side", type=int, default=4)
    parser.add_argument("--max-cap", type=int, default=3)
    parser.add_argument("--max-weight", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng = random.Random(args.seed)
    start = time.perf_counter()
    agree = 0
    for _ in range(args.instances):
        g = random_instance(
            rng, max_u=args.max_side, max_v=args.max_side,
            max_cap=args.max_cap, max_weight=args.max_weight,
        )
        agree += max_weight_b_matching(g).total_weight == brute_force_matching(g).total_weight
    star_agree = 0
    for _ in range(args.stars):
        g = random_star(rng, max_cap=args.max_cap, max_weight=args.max_weight)
        star_agree += greedy_star_matching(g).total_weight == max_weight_b_matching(g).total_weight
    elapsed = time.perf_counter() - start
    print(f"solver vs brute force: {agree}/{args.instances}")
    print(f"greedy vs solver:      {star_agree}/{args.stars}")
    print(f"elapsed:               {elapsed:.1f}s")
    return 0 if agree == args.instances and star_agree == args.stars else 1


if __name__ == "__main__":
    sys.exit(main())
