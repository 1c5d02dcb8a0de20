"""Seedable random generators for instances, payoffs, and knapsacks.

These feed the property suites and the experiment scripts.  Everything
takes an explicit ``random.Random`` so runs are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .game import grand_worth, marginal_utility
from .instance import Edge, GameInstance, PayoffVector, star_center
from .knapsack import KnapsackInstance, KnapsackItem


def random_instance(
    rng: random.Random,
    max_u: int = 4,
    max_v: int = 4,
    max_cap: int = 3,
    max_weight: int = 10,
    edge_prob: float = 0.6,
    rational_weights: bool = False,
) -> GameInstance:
    nu = rng.randint(1, max_u)
    nv = rng.randint(1, max_v)
    u_side = tuple(f"u{i + 1}" for i in range(nu))
    v_side = tuple(f"v{j + 1}" for j in range(nv))
    capacities = {vid: rng.randint(0, max_cap) for vid in u_side + v_side}
    edges = []
    for u in u_side:
        for v in v_side:
            if rng.random() < edge_prob:
                if rational_weights and rng.random() < 0.5:
                    w = Fraction(rng.randint(0, max_weight), rng.randint(1, 4))
                else:
                    w = Fraction(rng.randint(0, max_weight))
                edges.append(Edge(u, v, w))
    return GameInstance(u_side, v_side, capacities, tuple(edges))


def random_star(
    rng: random.Random,
    max_leaves: int = 8,
    max_cap: int = 4,
    max_weight: int = 10,
    min_leaves: int = 0,
    min_cap: int = 0,
    min_weight: int = 0,
) -> GameInstance:
    n = rng.randint(min_leaves, max_leaves)
    leaves = tuple(f"v{i + 1}" for i in range(n))
    capacities = {"u": rng.randint(min_cap, max_cap)}
    edges = []
    for leaf in leaves:
        capacities[leaf] = rng.randint(min_cap, max_cap)
        edges.append(Edge("u", leaf, Fraction(rng.randint(min_weight, max_weight))))
    return GameInstance(("u",), leaves, capacities, tuple(edges))


def random_payoff_split(rng: random.Random, g: GameInstance, total: Fraction) -> PayoffVector:
    """Nonnegative payoffs with the given exact total, random proportions."""
    agents = g.agents
    if not agents:
        return PayoffVector({})
    shares = [rng.randint(0, 8) for _ in agents]
    if sum(shares) == 0:
        shares[0] = 1
    denom = sum(shares)
    return PayoffVector({vid: total * s / denom for vid, s in zip(agents, shares)})


def random_imputation(rng: random.Random, g: GameInstance) -> PayoffVector:
    return random_payoff_split(rng, g, grand_worth(g))


def random_star_core_imputation(rng: random.Random, g: GameInstance) -> PayoffVector:
    """In-core star imputation: each leaf gets a random fraction of its
    marginal utility, the center absorbs the remainder.

    The remainder is nonnegative because leaf marginal utilities never
    add up to more than the grand worth on a star.
    """
    center, on_u = star_center(g)
    leaves = g.v_side if on_u else g.u_side
    total = grand_worth(g)
    payoffs: dict[str, Fraction] = {}
    spent = Fraction(0)
    for leaf in leaves:
        mu = marginal_utility(g, leaf)
        share = mu * rng.randint(0, 4) / 4
        payoffs[leaf] = share
        spent += share
    rest = total - spent
    assert rest >= 0, "leaf marginal utilities exceeded the grand worth"
    payoffs[center] = rest
    return PayoffVector(payoffs)


def random_star_noncore_imputation(
    rng: random.Random, g: GameInstance
) -> Optional[PayoffVector]:
    """Imputation paying some leaf above its marginal utility, or None
    when the core admits every imputation (no leaf has slack)."""
    center, on_u = star_center(g)
    leaves = list(g.v_side if on_u else g.u_side)
    total = grand_worth(g)
    base = random_imputation(rng, g)
    margins = {leaf: marginal_utility(g, leaf) for leaf in leaves}
    if any(base[leaf] > margins[leaf] for leaf in leaves):
        return base
    rng.shuffle(leaves)
    for leaf in leaves:
        if margins[leaf] < total and base[leaf] < total:
            target = (margins[leaf] + total) / 2
            factor = (total - target) / (total - base[leaf])
            payoffs = {vid: share * factor for vid, share in base.payoffs.items()}
            payoffs[leaf] = target
            return PayoffVector(payoffs)
    return None


def random_knapsack(
    rng: random.Random,
    max_items: int = 6,
    max_weight: int = 4,
    max_value: int = 6,
    max_capacity: int = 8,
    max_goal: Optional[int] = None,
) -> KnapsackInstance:
    n = rng.randint(0, max_items)
    items = tuple(
        KnapsackItem(weight=rng.randint(1, max_weight), value=rng.randint(0, max_value))
        for _ in range(n)
    )
    if max_goal is None:
        max_goal = sum(item.value for item in items) + 2
    return KnapsackInstance(
        items=items,
        capacity=rng.randint(0, max_capacity),
        goal=rng.randint(0, max_goal),
    )
