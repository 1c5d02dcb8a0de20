"""Star-graph specializations: polynomial core test and a
pseudo-polynomial unstable-coalition search.

On a star, an imputation is in the core exactly when no leaf is paid
more than its marginal utility, so membership reduces to one solve per
leaf.  For general (non-imputation) profit shares the question is much
harder; ``star_unstable_coalition_dp`` answers it for integer data with
a knapsack-style dynamic program over the center capacity.
"""

from __future__ import annotations

import logging
import random
from fractions import Fraction
from math import comb
from typing import Optional

from .game import CoreVerdict, is_imputation
from .instance import (
    Coalition,
    GameInstance,
    GuardError,
    NotAnImputationError,
    PayoffVector,
    ValidationError,
    star_center,
)

logger = logging.getLogger(__name__)

DP_STATE_BUDGET = 10**6
_EXHAUSTIVE_TRIPLE_LIMIT = 1 << 12


def _star_parts(g: GameInstance) -> tuple[str, tuple[str, ...], dict[str, Fraction]]:
    """Center id, leaves in input order, and leaf -> edge weight map."""
    center, on_u = star_center(g)
    leaves = g.v_side if on_u else g.u_side
    weights = {(e.v if on_u else e.u): e.weight for e in g.edges}
    return center, leaves, weights


class _StarWorths:
    """Memoized restricted worths over leaf subsets of a star.

    Exact by the greedy rule: a coalition containing the center matches
    the heaviest available edge copies until the center capacity runs
    out; a coalition without the center is worth 0.
    """

    def __init__(self, g: GameInstance) -> None:
        self.center, self.leaves, weights = _star_parts(g)
        self.center_cap = g.capacities[self.center]
        idx = {leaf: i for i, leaf in enumerate(self.leaves)}
        ranked = sorted(
            ((leaf, weights[leaf]) for leaf in self.leaves if weights.get(leaf, 0) > 0),
            key=lambda lw: (-lw[1], idx[lw[0]]),
        )
        self.ranked = [(1 << idx[leaf], g.capacities[leaf], w) for leaf, w in ranked]
        self._cache: dict[int, Fraction] = {}

    def value(self, leaf_mask: int) -> Fraction:
        got = self._cache.get(leaf_mask)
        if got is not None:
            return got
        remaining = self.center_cap
        total = Fraction(0)
        for bit, cap, w in self.ranked:
            if remaining == 0:
                break
            if leaf_mask & bit:
                take = min(cap, remaining)
                total += take * w
                remaining -= take
        self._cache[leaf_mask] = total
        return total


def check_core_star(g: GameInstance, p: PayoffVector) -> CoreVerdict:
    """Polynomial core test for star imputations.

    ``p`` is in the core iff every leaf satisfies
    ``p(leaf) <= nu(G) - nu(G without leaf)``.  On a violation by leaf
    v the witness is the complement coalition ``N \\ {v}``, whose
    deficit is ``nu(G without v) - (nu(G) - p(v))``.
    """
    worths = _StarWorths(g)
    if not is_imputation(g, p):
        raise NotAnImputationError("check_core_star requires an imputation")
    n = len(worths.leaves)
    full_mask = (1 << n) - 1
    nu_full = worths.value(full_mask)
    for i, leaf in enumerate(worths.leaves):
        nu_without = worths.value(full_mask & ~(1 << i))
        if p[leaf] > nu_full - nu_without:
            members = frozenset(a for a in g.agents if a != leaf)
            deficit = nu_without - (nu_full - p[leaf])
            return CoreVerdict(in_core=False, witness=(Coalition(members), deficit))
    return CoreVerdict(in_core=True)


def find_diminishing_marginals_violation(
    g: GameInstance, trials: int = 1000, rng: Optional[random.Random] = None
) -> Optional[tuple[Coalition, str, str]]:
    """Search for a triple breaking the diminishing-marginals inequality
    nu(S+v) - nu(S) >= nu(S+v+v') - nu(S+v') with S containing the
    center and v, v' leaves outside S.

    Exhausts all ordered triples when there are at most 2^12 of them,
    otherwise samples ``trials`` triples.  Returns the first violating
    triple found, or None.
    """
    worths = _StarWorths(g)
    leaves = worths.leaves
    n = len(leaves)
    total = sum(
        _popcount_choices(n, k) for k in range(n + 1)
    )

    def check(mask: int, i: int, j: int) -> bool:
        lhs = worths.value(mask | (1 << i)) - worths.value(mask)
        rhs = worths.value(mask | (1 << i) | (1 << j)) - worths.value(mask | (1 << j))
        return lhs >= rhs

    def as_triple(mask: int, i: int, j: int) -> tuple[Coalition, str, str]:
        members = frozenset([worths.center, *(leaves[t] for t in range(n) if (mask >> t) & 1)])
        return Coalition(members), leaves[i], leaves[j]

    if total <= _EXHAUSTIVE_TRIPLE_LIMIT:
        for mask in range(1 << n):
            outside = [i for i in range(n) if not (mask >> i) & 1]
            for i in outside:
                for j in outside:
                    if i != j and not check(mask, i, j):
                        return as_triple(mask, i, j)
        return None
    rng = rng if rng is not None else random.Random(0)
    done = 0
    while done < trials:
        mask = rng.getrandbits(n)
        outside = [i for i in range(n) if not (mask >> i) & 1]
        if len(outside) < 2:
            continue
        i, j = rng.sample(outside, 2)
        done += 1
        if not check(mask, i, j):
            return as_triple(mask, i, j)
    return None


def _popcount_choices(n: int, k: int) -> int:
    return comb(n, k) * (n - k) * (n - k - 1) if n - k >= 2 else 0


def verify_diminishing_marginals(
    g: GameInstance, trials: int = 1000, rng: Optional[random.Random] = None
) -> bool:
    """True iff no sampled (or exhausted) triple violates the
    diminishing-marginals inequality; a violation is logged."""
    violation = find_diminishing_marginals_violation(g, trials=trials, rng=rng)
    if violation is not None:
        coalition, v, v2 = violation
        logger.warning(
            "diminishing-marginals violation: S=%s v=%s v'=%s",
            sorted(coalition.members), v, v2,
        )
        return False
    return True


def _require_integer(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ValidationError(f"{what} must be an integer, got {value}")
    return value.numerator


def _best_center_coalition(
    g: GameInstance, p: PayoffVector, state_budget: int = DP_STATE_BUDGET
) -> tuple[Coalition, Fraction]:
    """Exact maximizer of nu(S) - p(S) over coalitions containing the
    center, by dynamic programming over consumed center capacity.

    Leaves are processed in nonincreasing weight order (ties by input
    order); including a leaf consumes min(leaf capacity, remaining
    units) and gains weight times that amount, minus the leaf payoff.
    Requires integer weights and payoffs.
    """
    center, leaves, weights = _star_parts(g)
    if set(p.payoffs) != set(g.agents):
        raise ValidationError("payoff domain must equal the agent set of the instance")
    cap_center = g.capacities[center]
    states = (len(leaves) + 1) * (cap_center + 1)
    if states > state_budget:
        raise GuardError(f"{states} DP states exceed budget {state_budget}")
    p_center = _require_integer(p[center], f"payoff of {center!r}")
    idx = {leaf: i for i, leaf in enumerate(leaves)}
    ranked = sorted(
        leaves,
        key=lambda leaf: (-_require_integer(weights.get(leaf, Fraction(0)), f"weight at {leaf!r}"), idx[leaf]),
    )
    leaf_data = [
        (
            leaf,
            g.capacities[leaf],
            _require_integer(weights.get(leaf, Fraction(0)), f"weight at {leaf!r}"),
            _require_integer(p[leaf], f"payoff of {leaf!r}"),
        )
        for leaf in ranked
    ]
    neg = None
    width = cap_center + 1
    dp: list[Optional[int]] = [neg] * width
    dp[0] = 0
    parents: list[list[tuple[int, bool]]] = []
    for _, cap, w, pay in leaf_data:
        nxt: list[Optional[int]] = [neg] * width
        par: list[tuple[int, bool]] = [(-1, False)] * width
        for used in range(width):
            cur = dp[used]
            if cur is None:
                continue
            if nxt[used] is None or cur > nxt[used]:
                nxt[used] = cur
                par[used] = (used, False)
            take = min(cap, cap_center - used)
            gain = w * take - pay
            target = used + take
            cand = cur + gain
            if nxt[target] is None or cand > nxt[target]:
                nxt[target] = cand
                par[target] = (used, True)
        dp = nxt
        parents.append(par)
    best_used = 0
    best_val = dp[0] if dp[0] is not None else 0
    for used in range(width):
        if dp[used] is not None and dp[used] > best_val:
            best_val = dp[used]
            best_used = used
    chosen: set[str] = set()
    used = best_used
    for layer in range(len(leaf_data) - 1, -1, -1):
        prev_used, included = parents[layer][used]
        if included:
            chosen.add(leaf_data[layer][0])
        used = prev_used
    members = frozenset([center, *chosen])
    return Coalition(members), Fraction(best_val - p_center)


def star_unstable_coalition_dp(
    g: GameInstance, p: PayoffVector, state_budget: int = DP_STATE_BUDGET
) -> Optional[tuple[Coalition, Fraction]]:
    """Strictly positive-deficit coalition of a star under an integer
    profit share, or None when every coalition is satisfied.

    Coalitions without the center have nonpositive deficit (payoffs are
    nonnegative and their worth is 0), so the search maximizes over
    center-containing coalitions only.
    """
    coalition, deficit = _best_center_coalition(g, p, state_budget=state_budget)
    if deficit > 0:
        return coalition, deficit
    return None
