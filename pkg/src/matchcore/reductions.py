"""Constructive hardness gadgets and their exact verifiers.

Three constructions, each paired with a verifier that recomputes every
expected quantity from scratch and reports exact comparisons:

* ``knapsack_to_star`` embeds a 0-1 knapsack decision into a star game
  with a general profit share: an unstable coalition exists iff the
  knapsack is a YES instance.
* ``star_to_bipartite_gadget`` lifts that star to a general bipartite
  game with two auxiliary vertices so that the profit share becomes an
  imputation while the unstable coalitions are preserved verbatim.
* ``partner_duplication`` doubles every vertex with a heavy partner
  edge so that the all-equal payoff is an imputation that sits in the
  core iff the source imputation does.

Generated instances carry a ``provenance`` block naming the source
artifacts, so a verifier (or the CLI ``verify`` subcommand) can rebuild
its expectations without trusting the generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .game import check_core_bruteforce, grand_worth, is_imputation, max_deficit
from .instance import (
    Coalition,
    Edge,
    GameInstance,
    GuardError,
    NotAnImputationError,
    PayoffVector,
    ValidationError,
    format_rational,
    instance_to_doc,
    payoffs_to_doc,
    restrict,
    star_center,
)
from .knapsack import KnapsackInstance, KnapsackItem, knapsack_to_doc
from .solver import _network, max_weight_b_matching

VERIFY_AGENT_GUARD = 20
PARTNER_AGENT_GUARD = 10


@dataclass(frozen=True)
class ReductionCheck:
    name: str
    expected: Fraction
    actual: Fraction

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class ReductionReport:
    checks: tuple[ReductionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{status} {c.name}: expected={format_rational(c.expected)}"
                f" actual={format_rational(c.actual)}"
            )
        ok = sum(1 for c in self.checks if c.passed)
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"REPORT {verdict} ({ok}/{len(self.checks)} checks)")
        return "\n".join(lines) + "\n"


def _check(name: str, expected: object, actual: object) -> ReductionCheck:
    return ReductionCheck(name, Fraction(expected), Fraction(actual))


def _indicator(name: str, holds: bool) -> ReductionCheck:
    return ReductionCheck(name, Fraction(1), Fraction(1 if holds else 0))


# ---------------------------------------------------------------------------
# knapsack -> star


def knapsack_to_star(k: KnapsackInstance) -> tuple[GameInstance, PayoffVector]:
    """Star game whose unstable coalitions mirror knapsack solutions.

    Item i becomes leaf ``vi`` with capacity c_i, edge weight a_i + 1
    and payoff c_i (a_i + 1) - a_i; the center ``u`` gets capacity C
    and payoff A.  All payoffs are nonnegative because c_i >= 1.
    """
    leaves = tuple(f"v{i + 1}" for i in range(len(k.items)))
    capacities: dict[str, int] = {"u": k.capacity}
    edges = []
    payoffs: dict[str, Fraction] = {"u": Fraction(k.goal)}
    for leaf, item in zip(leaves, k.items):
        capacities[leaf] = item.weight
        edges.append(Edge("u", leaf, Fraction(item.value + 1)))
        payoffs[leaf] = Fraction(item.weight * (item.value + 1) - item.value)
    g = GameInstance(
        u_side=("u",),
        v_side=leaves,
        capacities=capacities,
        edges=tuple(edges),
        provenance={"kind": "knapsack_to_star", "knapsack": knapsack_to_doc(k)},
    )
    return g, PayoffVector(payoffs)


def knapsack_from_star(g: GameInstance, p: PayoffVector) -> KnapsackInstance:
    """Invert the construction; raises unless (g, p) is reduction-shaped."""
    center, on_u = star_center(g)
    leaves = g.v_side if on_u else g.u_side
    weights = {(e.v if on_u else e.u): e.weight for e in g.edges}
    goal = p[center]
    if goal.denominator != 1:
        raise ValidationError(f"center payoff {goal} is not an integer goal")
    items = []
    for leaf in leaves:
        w = weights.get(leaf)
        if w is None or w.denominator != 1 or w < 1:
            raise ValidationError(f"leaf {leaf!r}: weight must be an integer >= 1")
        value = int(w) - 1
        weight = g.capacities[leaf]
        expected_pay = weight * (value + 1) - value
        if p[leaf] != expected_pay:
            raise ValidationError(
                f"leaf {leaf!r}: payoff {p[leaf]} does not match the reduction form {expected_pay}"
            )
        items.append((weight, value))
    return KnapsackInstance(
        items=tuple(KnapsackItem(weight=c, value=a) for c, a in items),
        capacity=g.capacities[center],
        goal=int(goal),
    )


def verify_fully_matched_lemmas(
    g: GameInstance, p: PayoffVector, max_agents: int = VERIFY_AGENT_GUARD
) -> ReductionReport:
    """Per-coalition arithmetic behind the knapsack embedding.

    For every center coalition whose leaves are all fully matched in the
    canonical greedy optimum, the deficit must equal (sum of item values
    in the coalition) - goal, exactly.  For every coalition with a leaf
    that is not fully matched, dropping that leaf must raise the deficit
    by at least 1.
    """
    k = knapsack_from_star(g, p)
    if len(g.agents) > max_agents:
        raise GuardError(f"{len(g.agents)} agents exceed verifier guard {max_agents}")
    center, on_u = star_center(g)
    leaves = g.v_side if on_u else g.u_side
    values = {leaf: item.value for leaf, item in zip(leaves, k.items)}
    caps = {leaf: item.weight for leaf, item in zip(leaves, k.items)}
    weights = {leaf: item.value + 1 for leaf, item in zip(leaves, k.items)}
    idx = {leaf: i for i, leaf in enumerate(leaves)}
    order = sorted(leaves, key=lambda leaf: (-weights[leaf], idx[leaf]))

    def greedy(chosen: frozenset[str]) -> tuple[Fraction, dict[str, int]]:
        remaining = g.capacities[center]
        total = 0
        mults: dict[str, int] = {}
        for leaf in order:
            if remaining == 0:
                break
            if leaf in chosen:
                take = min(caps[leaf], remaining)
                mults[leaf] = take
                total += take * weights[leaf]
                remaining -= take
        return Fraction(total), mults

    def deficit(chosen: frozenset[str]) -> Fraction:
        value, _ = greedy(chosen)
        return value - p[center] - sum((p[leaf] for leaf in chosen), Fraction(0))

    checks: list[ReductionCheck] = []
    n = len(leaves)
    for mask in range(1 << n):
        chosen = frozenset(leaves[i] for i in range(n) if (mask >> i) & 1)
        value, mults = greedy(chosen)
        d = value - p[center] - sum((p[leaf] for leaf in chosen), Fraction(0))
        label = "{" + ",".join(sorted([center, *chosen])) + "}"
        loose = [leaf for leaf in chosen if mults.get(leaf, 0) < caps[leaf]]
        if not loose:
            expected = Fraction(sum(values[leaf] for leaf in chosen) - k.goal)
            checks.append(_check(f"deficit of fully-matched {label} equals value sum minus goal", expected, d))
        else:
            for leaf in loose:
                gain = deficit(chosen - {leaf}) - d
                checks.append(
                    _indicator(
                        f"dropping loose leaf {leaf} from {label} raises the deficit by {gain} (>= 1)",
                        gain >= 1,
                    )
                )
    return ReductionReport(tuple(checks))


# ---------------------------------------------------------------------------
# star -> general bipartite


def _fresh_id(base: str, taken: set[str]) -> str:
    candidate = base
    while candidate in taken:
        candidate += "_"
    return candidate


def star_to_bipartite_gadget(
    g_star: GameInstance, p: PayoffVector
) -> tuple[GameInstance, PayoffVector]:
    """Attach absorber vertices x (all leaves) and y (the center) so the
    profit share extends to an imputation with the same unstable sets.

    Weights and payoffs: w_x = sum of leaf payoffs + 1, w_y = center
    payoff + 1, b_x = total leaf capacity, b_y = center capacity,
    p_x = (b_x - 1) w_x + 1, p_y = (b_y - 1) w_y + 1.

    Inputs must satisfy w_i <= p(G) + 1 for every star edge; otherwise a
    center-leaf edge could out-weigh both absorbers and the accounting
    below would not close.  Degenerate inputs whose absorber payoffs
    would turn negative are rejected rather than clamped.
    """
    center, on_u = star_center(g_star)
    leaves = g_star.v_side if on_u else g_star.u_side
    if set(p.payoffs) != set(g_star.agents):
        raise ValidationError("payoff domain must equal the agent set of the instance")
    if not leaves:
        raise ValidationError("gadget construction requires a star with at least one leaf")
    total_pay = p.total()
    for e in g_star.edges:
        if e.weight > total_pay + 1:
            raise ValidationError(
                f"edge ({e.u!r}, {e.v!r}) weight {e.weight} exceeds total payoff + 1 = "
                f"{total_pay + 1}; the absorber exchange argument needs "
                "w <= p(G) + 1"
            )
    sum_leaf_pay = sum((p[leaf] for leaf in leaves), Fraction(0))
    w_x = sum_leaf_pay + 1
    w_y = p[center] + 1
    b_x = sum(g_star.capacities[leaf] for leaf in leaves)
    b_y = g_star.capacities[center]
    p_x = (b_x - 1) * w_x + 1
    p_y = (b_y - 1) * w_y + 1
    if b_x == 0:
        raise ValidationError("total leaf capacity is 0; absorber x would need a negative payoff")
    if p_y < 0:
        raise ValidationError(
            f"absorber y payoff {p_y} is negative (center capacity {b_y}); "
            "profit shares must be nonnegative"
        )
    taken = set(g_star.agents)
    x_id = _fresh_id("x", taken)
    taken.add(x_id)
    y_id = _fresh_id("y", taken)
    x_edges = [
        Edge(x_id, leaf, w_x) if on_u else Edge(leaf, x_id, w_x) for leaf in leaves
    ]
    y_edge = Edge(center, y_id, w_y) if on_u else Edge(y_id, center, w_y)
    if on_u:
        u_side = g_star.u_side + (x_id,)
        v_side = g_star.v_side + (y_id,)
    else:
        u_side = g_star.u_side + (y_id,)
        v_side = g_star.v_side + (x_id,)
    capacities = dict(g_star.capacities)
    capacities[x_id] = b_x
    capacities[y_id] = b_y
    g = GameInstance(
        u_side=u_side,
        v_side=v_side,
        capacities=capacities,
        edges=g_star.edges + tuple(x_edges) + (y_edge,),
        provenance={
            "kind": "star_to_bipartite_gadget",
            "x": x_id,
            "y": y_id,
            "star": instance_to_doc(g_star),
            "star_payoff": payoffs_to_doc(p, g_star.agents),
        },
    )
    payoffs = dict(p.payoffs)
    payoffs[x_id] = p_x
    payoffs[y_id] = p_y
    return g, PayoffVector(payoffs)


def _unstable_sets(g: GameInstance, p: PayoffVector) -> set[frozenset[str]]:
    """All coalitions with strictly positive deficit, by enumeration."""
    agents = g.agents
    n = len(agents)
    net = _network(g)
    nu = len(g.u_side)
    umask_all = (1 << nu) - 1
    denom = math.lcm(net.scale, *(p.payoffs[a].denominator for a in agents)) if n else net.scale
    mul = denom // net.scale
    pay = [int(p.payoffs[a] * denom) for a in agents]
    out: set[frozenset[str]] = set()
    for mask in range(1, 1 << n):
        value = net.value_for_masks(mask & umask_all, mask >> nu)
        paid = 0
        bits = mask
        while bits:
            low = bits & -bits
            paid += pay[low.bit_length() - 1]
            bits ^= low
        if value * mul - paid > 0:
            out.add(frozenset(agents[i] for i in range(n) if (mask >> i) & 1))
    return out


def verify_gadget(
    g: GameInstance,
    p: PayoffVector,
    brute_force: bool = True,
    max_agents: int = VERIFY_AGENT_GUARD,
) -> ReductionReport:
    """Recompute every identity the gadget construction promises.

    Always checks the closed forms: the extended payoff is an imputation
    with total b_x w_x + b_y w_y, the two absorber coalitions
    {center, y} and {x} + leaves are paid exactly their worth, and the
    solver's optimal matching uses no center-leaf edge.  With
    ``brute_force`` (guarded by agent count) it additionally enumerates
    all coalitions and reports: whether any unstable coalition contains
    an absorber (the literal claim, which has counterexamples), whether
    star-agent coalitions are unstable in the gadget exactly when they
    are unstable in the star, and whether the maximum deficit transfers
    with an absorber-free witness (the decision-level guarantee).
    """
    prov = g.provenance or {}
    if prov.get("kind") != "star_to_bipartite_gadget":
        raise ValidationError("instance does not carry star_to_bipartite_gadget provenance")
    x_id, y_id = prov["x"], prov["y"]
    star_agents = [a for a in g.agents if a not in (x_id, y_id)]
    star = restrict(g, Coalition.from_iterable(star_agents))
    center, on_u = star_center(star)
    leaves = star.v_side if on_u else star.u_side
    x_weights = {e.weight for e in g.edges if x_id in (e.u, e.v)}
    if len(x_weights) != 1:
        raise ValidationError("absorber x must touch every leaf with one uniform weight")
    w_x = x_weights.pop()
    w_y = next(e.weight for e in g.edges if y_id in (e.u, e.v))
    b_x, b_y = g.capacities[x_id], g.capacities[y_id]
    sum_leaf_pay = sum((p[leaf] for leaf in leaves), Fraction(0))
    sum_leaf_cap = sum(star.capacities[leaf] for leaf in leaves)
    closed_form = b_x * w_x + b_y * w_y

    checks = [
        _check("x edge weight equals leaf payoff total + 1", sum_leaf_pay + 1, w_x),
        _check("y edge weight equals center payoff + 1", p[center] + 1, w_y),
        _check("x capacity equals total leaf capacity", sum_leaf_cap, b_x),
        _check("y capacity equals center capacity", star.capacities[center], b_y),
        _check("x payoff", (b_x - 1) * w_x + 1, p[x_id]),
        _check("y payoff", (b_y - 1) * w_y + 1, p[y_id]),
        _check("payoff total equals b_x*w_x + b_y*w_y", closed_form, p.total()),
    ]
    optimum = max_weight_b_matching(g)
    checks.append(_check("grand worth equals b_x*w_x + b_y*w_y", closed_form, optimum.total_weight))
    checks.append(_check("payoff total equals grand worth (imputation)", optimum.total_weight, p.total()))
    star_pairs = {(e.u, e.v) for e in star.edges}
    stray = sum(m for pair, m in optimum.multiplicities.items() if pair in star_pairs)
    checks.append(_check("optimal matching uses no center-leaf edge", 0, stray))

    uy = Coalition.of(center, y_id)
    uy_worth = max_weight_b_matching(restrict(g, uy)).total_weight
    uy_closed = b_y * p[center] + b_y
    checks.append(_check("worth of {center, y} matches closed form", uy_closed, uy_worth))
    checks.append(_check("paid to {center, y} matches closed form", uy_closed, p.total(uy.members)))

    xl = Coalition.from_iterable([x_id, *leaves])
    xl_worth = max_weight_b_matching(restrict(g, xl)).total_weight
    xl_closed = sum_leaf_cap * (sum_leaf_pay + 1)
    checks.append(_check("worth of {x} + leaves matches closed form", xl_closed, xl_worth))
    checks.append(_check("paid to {x} + leaves matches closed form", xl_closed, p.total(xl.members)))

    if brute_force:
        if len(g.agents) > max_agents:
            raise GuardError(f"{len(g.agents)} agents exceed verifier guard {max_agents}")
        gadget_unstable = _unstable_sets(g, p)
        star_payoff = PayoffVector({a: p[a] for a in star.agents})
        star_unstable = _unstable_sets(star, star_payoff)
        # Literal absorber-exclusion claim.  It can fail: padding an
        # unstable coalition with an idle absorber costs only its payoff,
        # which may be smaller than the deficit (see the package notes on
        # verification).  The report states the truth either way.
        touching = sum(1 for s in gadget_unstable if x_id in s or y_id in s)
        checks.append(_check("unstable coalitions containing an absorber", 0, touching))
        absorber_free = {s for s in gadget_unstable if x_id not in s and y_id not in s}
        checks.append(
            _check(
                "star coalitions unstable in gadget iff unstable in star",
                0,
                len(absorber_free ^ star_unstable),
            )
        )
        # The decision-level guarantees the construction actually needs.
        star_best, star_deficit = max_deficit(star, star_payoff, max_agents=max_agents)
        gadget_best, gadget_deficit = max_deficit(g, p, max_agents=max_agents)
        checks.append(_check("maximum deficit agrees with the star", star_deficit, gadget_deficit))
        checks.append(
            _indicator(
                "a maximum-deficit coalition excludes the absorbers",
                gadget_deficit <= 0 or (x_id not in gadget_best and y_id not in gadget_best),
            )
        )
    return ReductionReport(tuple(checks))


# ---------------------------------------------------------------------------
# partner duplication


def heaviest_share_bound(g: GameInstance, p: PayoffVector) -> Fraction:
    """The uniform payoff level p* = 1 + (largest payoff + largest weight).

    The sum matters: with any smaller p*, a coalition holding a vertex
    v but not its partner can exploit v's extra capacity unit on an
    original edge, and adding the partner then raises the worth by only
    2p* - p(v) - w(e), which must still exceed the payoff increase p*
    for core membership to transfer back from the duplicated game.
    """
    max_pay = max(p.payoffs.values(), default=Fraction(0))
    max_weight = max((e.weight for e in g.edges), default=Fraction(0))
    return max_pay + max_weight + 1


def partner_duplication(
    g: GameInstance, p: PayoffVector
) -> tuple[GameInstance, PayoffVector]:
    """Double every vertex with a capacity-1 partner across the side gap.

    Partner edges weigh 2 p* - p(v) with p* from
    ``heaviest_share_bound``, so each out-weighs every other edge at its
    vertex by more than p* and every optimum takes all of them.
    Original capacities grow by one to host the partner edge; the new
    payoff is the constant p*.
    """
    if not is_imputation(g, p):
        raise NotAnImputationError("partner duplication requires an imputation")
    p_star = heaviest_share_bound(g, p)
    taken = set(g.agents)
    partners: dict[str, str] = {}
    for vid in g.agents:
        partner = _fresh_id(vid + "'", taken)
        taken.add(partner)
        partners[vid] = partner
    u_side = g.u_side + tuple(partners[v] for v in g.v_side)
    v_side = g.v_side + tuple(partners[u] for u in g.u_side)
    capacities: dict[str, int] = {}
    for vid in g.agents:
        capacities[vid] = g.capacities[vid] + 1
        capacities[partners[vid]] = 1
    partner_edges = [Edge(u, partners[u], 2 * p_star - p[u]) for u in g.u_side]
    partner_edges += [Edge(partners[v], v, 2 * p_star - p[v]) for v in g.v_side]
    g2 = GameInstance(
        u_side=u_side,
        v_side=v_side,
        capacities=capacities,
        edges=g.edges + tuple(partner_edges),
        provenance={
            "kind": "partner_duplication",
            "source": instance_to_doc(g),
            "source_payoff": payoffs_to_doc(p, g.agents),
            "partners": dict(partners),
        },
    )
    p2 = PayoffVector({vid: p_star for vid in g2.agents})
    return g2, p2


def verify_partner_equivalence(
    g: GameInstance,
    p: PayoffVector,
    g2: GameInstance,
    p2: PayoffVector,
    max_agents: int = PARTNER_AGENT_GUARD,
) -> ReductionReport:
    """Exhaustively confirm that core membership transfers both ways.

    Rebuilds the duplication from (g, p) and demands it match (g2, p2)
    exactly, checks that the uniform payoff is an imputation, compares
    the brute-force verdicts, and when both games are unstable validates
    the doubled witness: for a witness S in g, the coalition of S plus
    its partners falls short in g2 and its worth obeys
    nu'(S') = nu(S) + 2 |S| p* - p(S).
    """
    if len(g.agents) > max_agents:
        raise GuardError(f"{len(g.agents)} agents exceed partner verifier guard {max_agents}")
    expected_g2, expected_p2 = partner_duplication(g, p)
    if instance_to_doc(expected_g2) != instance_to_doc(g2) or expected_p2.payoffs != p2.payoffs:
        raise ValidationError("(g2, p2) is not the partner duplication of (g, p)")
    partners = {vid: (g2.provenance or {})["partners"][vid] for vid in g.agents}
    p_star = heaviest_share_bound(g, p)

    checks = [
        _check("duplicated payoff total equals duplicated worth", grand_worth(g2), p2.total()),
        _indicator("duplicated payoff is an imputation", is_imputation(g2, p2)),
    ]
    base = check_core_bruteforce(g, p)
    doubled = check_core_bruteforce(g2, p2, allow_profit_share=True)
    checks.append(
        ReductionCheck(
            "core verdicts coincide",
            Fraction(1 if base.in_core else 0),
            Fraction(1 if doubled.in_core else 0),
        )
    )
    if not base.in_core and not doubled.in_core:
        witness, deficit = max_deficit(g, p)
        doubled_members = frozenset(
            [*witness.members, *(partners[v] for v in witness.members)]
        )
        s2 = Coalition(doubled_members)
        nu2 = max_weight_b_matching(restrict(g2, s2)).total_weight
        nu1 = max_weight_b_matching(restrict(g, witness)).total_weight
        predicted = nu1 + 2 * len(witness.members) * p_star - p.total(witness.members)
        checks.append(_check("doubled witness worth matches transfer formula", predicted, nu2))
        checks.append(
            _indicator(
                "doubled witness is unstable in the duplicated game",
                p2.total(s2.members) < nu2,
            )
        )
    return ReductionReport(tuple(checks))
