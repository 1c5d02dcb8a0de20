#!/usr/bin/env python3
"""Sweep a knapsack grid through both hardness constructions and tally
how the reduction behaves.

For every item multiset (weights 1..max-c, values 0..max-a, up to
--max-items items), capacity and goal in range, the script reduces to a
star, compares the knapsack verdict against the star's brute-force and
DP unstable-coalition searches, then builds the bipartite gadget (when
its precondition admits it) and tallies the absorber-exclusion claim,
which is known to fail on a fraction of gadgets.

Example:
    python scripts/knapsack_grid.py --max-items 3 --max-c 2 --max-a 3 --max-C 4 --max-A 6
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from fractions import Fraction

from matchcore import (
    KnapsackInstance,
    KnapsackItem,
    PayoffVector,
    ValidationError,
    knapsack_to_star,
    max_deficit,
    solve_knapsack,
    star_to_bipartite_gadget,
    star_unstable_coalition_dp,
)
from matchcore.reductions import _unstable_sets


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-items", type=int, default=3)
    parser.add_argument("--max-c", type=int, default=3)
    parser.add_argument("--max-a", type=int, default=4)
    parser.add_argument("--max-C", type=int, default=4)
    parser.add_argument("--max-A", type=int, default=8)
    args = parser.parse_args(argv)

    item_types = [(c, a) for c in range(1, args.max_c + 1) for a in range(args.max_a + 1)]
    multisets = []
    for n in range(args.max_items + 1):
        multisets.extend(itertools.combinations_with_replacement(item_types, n))

    start = time.perf_counter()
    points = sound = dp_sound = 0
    generated = rejected = absorber_violations = 0
    for items in multisets:
        for capacity in range(args.max_C + 1):
            k0 = KnapsackInstance(tuple(KnapsackItem(c, a) for c, a in items), capacity, 0)
            g, p0 = knapsack_to_star(k0)
            for goal in range(args.max_A + 1):
                points += 1
                k = KnapsackInstance(k0.items, capacity, goal)
                payoffs = dict(p0.payoffs)
                payoffs["u"] = Fraction(goal)
                p = PayoffVector(payoffs)
                yes = solve_knapsack(k).yes
                _, deficit = max_deficit(g, p)
                sound += yes == (deficit > 0)
                dp_sound += (star_unstable_coalition_dp(g, p) is not None) == yes
                try:
                    gg, pg = star_to_bipartite_gadget(g, p)
                except ValidationError:
                    rejected += 1
                    continue
                generated += 1
                x_id, y_id = gg.provenance["x"], gg.provenance["y"]
                if any(x_id in s or y_id in s for s in _unstable_sets(gg, pg)):
                    absorber_violations += 1
    elapsed = time.perf_counter() - start
    print(f"grid points:            {points}")
    print(f"knapsack<->star sound:  {sound}/{points}")
    print(f"knapsack<->DP sound:    {dp_sound}/{points}")
    print(f"gadgets generated:      {generated} (rejected {rejected})")
    print(f"absorber violations:    {absorber_violations}/{generated}")
    print(f"elapsed:                {elapsed:.1f}s")
    return 0 if sound == points and dp_sound == points else 1


if __name__ == "__main__":
    sys.exit(main())
