"""Characteristic function and core analysis for transportation games.

The worth of a coalition is the maximum weight of a b-matching on the
induced sub-instance.  Core membership is decided here by exhaustive
coalition enumeration (bitmasks over the input vertex order), guarded
at 24 agents; the star module offers the polynomial route for stars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .instance import (
    Coalition,
    GameInstance,
    GuardError,
    NotAnImputationError,
    PayoffVector,
    ValidationError,
    restrict,
)
from .solver import _network, max_weight_b_matching

AGENT_GUARD = 24


@dataclass(frozen=True)
class CoreVerdict:
    """Outcome of a core-membership check.

    ``witness`` is present exactly when ``in_core`` is false; it names an
    unstable coalition together with its deficit (worth minus paid), a
    strictly positive rational.
    """

    in_core: bool
    witness: Optional[tuple[Coalition, Fraction]] = None


def _check_domain(g: GameInstance, p: PayoffVector) -> None:
    if set(p.payoffs) != set(g.agents):
        raise ValidationError("payoff domain must equal the agent set of the instance")


def worth(g: GameInstance, s: Coalition) -> Fraction:
    """Maximum b-matching weight achievable by coalition ``s`` alone."""
    unknown = s.members - set(g.agents)
    if unknown:
        raise ValidationError(f"coalition member(s) {sorted(unknown)} not in the instance")
    return max_weight_b_matching(restrict(g, s)).total_weight


def grand_worth(g: GameInstance) -> Fraction:
    net = _network(g)
    umask, vmask = net.full_masks()
    return Fraction(net.value_for_masks(umask, vmask), net.scale)


def is_imputation(g: GameInstance, p: PayoffVector) -> bool:
    """True iff ``p`` is nonnegative and exhausts the grand-coalition worth."""
    _check_domain(g, p)
    if any(share < 0 for share in p.payoffs.values()):
        return False
    return p.total() == grand_worth(g)


def marginal_utility(g: GameInstance, agent: str) -> Fraction:
    """Drop in total worth when ``agent`` leaves the grand coalition."""
    if agent not in g.agents:
        raise ValidationError(f"unknown agent {agent!r}")
    net = _network(g)
    umask, vmask = net.full_masks()
    full = net.value_for_masks(umask, vmask)
    if agent in g.u_side:
        umask &= ~(1 << g.u_side.index(agent))
    else:
        vmask &= ~(1 << g.v_side.index(agent))
    return Fraction(full - net.value_for_masks(umask, vmask), net.scale)


def coalition_deficit(g: GameInstance, p: PayoffVector, s: Coalition) -> Fraction:
    """nu(S) - p(S); positive iff ``s`` is unstable under ``p``."""
    _check_domain(g, p)
    return worth(g, s) - p.total(s.members)


def max_deficit(
    g: GameInstance, p: PayoffVector, max_agents: int = AGENT_GUARD
) -> tuple[Coalition, Fraction]:
    """Coalition maximizing nu(S) - p(S) over all 2^n subsets.

    The empty coalition (deficit 0) participates, so the returned deficit
    is never negative.  Ties break toward the smallest bitmask in input
    vertex order.
    """
    _check_domain(g, p)
    agents = g.agents
    n = len(agents)
    if n > max_agents:
        raise GuardError(f"{n} agents exceed the enumeration guard of {max_agents}")
    net = _network(g)
    nu = len(g.u_side)
    denom = math.lcm(net.scale, *(p.payoffs[a].denominator for a in agents)) if n else net.scale
    weight_mul = denom // net.scale
    pay = [int(p.payoffs[a] * denom) for a in agents]
    best_deficit = 0
    best_mask = 0
    umask_all = (1 << nu) - 1
    for mask in range(1, 1 << n):
        value = net.value_for_masks(mask & umask_all, mask >> nu)
        paid = 0
        bits = mask
        while bits:
            low = bits & -bits
            paid += pay[low.bit_length() - 1]
            bits ^= low
        deficit = value * weight_mul - paid
        if deficit > best_deficit:
            best_deficit = deficit
            best_mask = mask
    members = frozenset(agents[i] for i in range(n) if (best_mask >> i) & 1)
    return Coalition(members), Fraction(best_deficit, denom)


def check_core_bruteforce(
    g: GameInstance,
    p: PayoffVector,
    allow_profit_share: bool = False,
    max_agents: int = AGENT_GUARD,
) -> CoreVerdict:
    """Exhaustive core test: ``p`` is in the core iff no coalition can
    earn more on its own than it is paid.

    Requires an imputation unless ``allow_profit_share`` is set; the
    hardness constructions deliberately hand general profit shares to
    this check.
    """
    if not allow_profit_share and not is_imputation(g, p):
        raise NotAnImputationError(
            "payoffs do not form an imputation; pass allow_profit_share=True "
            "to test a general profit share"
        )
    coalition, deficit = max_deficit(g, p, max_agents=max_agents)
    if deficit > 0:
        return CoreVerdict(in_core=False, witness=(coalition, deficit))
    return CoreVerdict(in_core=True)
