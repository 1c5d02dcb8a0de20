"""Worth, imputations, marginal utilities, and exhaustive core checks."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from matchcore import (
    Coalition,
    Edge,
    GameInstance,
    GuardError,
    NotAnImputationError,
    ValidationError,
    brute_force_matching,
    check_core_bruteforce,
    coalition_deficit,
    grand_worth,
    is_imputation,
    marginal_utility,
    max_deficit,
    payoffs_for,
    restrict,
    worth,
)
from matchcore.generators import random_imputation, random_instance, random_payoff_split

from strategies import instances


def test_single_vertex_coalitions_are_worthless(star_a):
    assert worth(star_a, Coalition.of()) == 0
    for vid in star_a.agents:
        assert worth(star_a, Coalition.of(vid)) == 0


def test_one_sided_coalitions_are_worthless(star_a):
    assert worth(star_a, Coalition.of("v1", "v2")) == 0


def test_worth_matches_brute_force(star_a):
    s = Coalition.of("u", "v2")
    assert worth(star_a, s) == 4
    assert worth(star_a, s) == brute_force_matching(restrict(star_a, s)).total_weight


def test_worth_rejects_outsiders(star_a):
    with pytest.raises(ValidationError):
        worth(star_a, Coalition.of("zz"))


def test_is_imputation_examples(star_a, star_a_core_payoff):
    empty_game = GameInstance(("u",), ("v",), {"u": 1, "v": 1}, ())
    assert is_imputation(empty_game, payoffs_for(empty_game, {"u": 0, "v": 0}))
    over = payoffs_for(star_a, {"u": 4, "v1": 1, "v2": 1})
    assert not is_imputation(star_a, over)
    assert is_imputation(star_a, star_a_core_payoff)


def test_marginal_utilities(star_a):
    assert marginal_utility(star_a, "v1") == 1
    assert marginal_utility(star_a, "v2") == 2
    assert marginal_utility(star_a, "u") == 5
    isolated = GameInstance(("u",), ("v", "w"), {"u": 1, "v": 1, "w": 2},
                            (Edge("u", "v", Fraction(3)),))
    assert marginal_utility(isolated, "w") == 0
    with pytest.raises(ValidationError, match="unknown agent"):
        marginal_utility(star_a, "zz")


def test_check_core_in_and_out(star_a, star_a_core_payoff, star_a_noncore_payoff):
    assert check_core_bruteforce(star_a, star_a_core_payoff).in_core
    verdict = check_core_bruteforce(star_a, star_a_noncore_payoff)
    assert not verdict.in_core
    coalition, deficit = verdict.witness
    assert coalition.members == {"u", "v2"}
    assert deficit == Fraction(1, 2)


def test_edgeless_game_has_full_core():
    g = GameInstance(("a",), ("b",), {"a": 2, "b": 2}, ())
    zeros = payoffs_for(g, {"a": 0, "b": 0})
    assert check_core_bruteforce(g, zeros).in_core
    rich = payoffs_for(g, {"a": 5, "b": 7})
    assert check_core_bruteforce(g, rich, allow_profit_share=True).in_core


def test_profit_share_needs_flag(star_a):
    not_imp = payoffs_for(star_a, {"u": 0, "v1": 0, "v2": 0})
    with pytest.raises(NotAnImputationError):
        check_core_bruteforce(star_a, not_imp)
    assert check_core_bruteforce(star_a, not_imp, allow_profit_share=True).in_core is False


def test_max_deficit_examples(star_a, star_a_core_payoff):
    huge = payoffs_for(star_a, {"u": 100, "v1": 100, "v2": 100})
    coalition, deficit = max_deficit(star_a, huge)
    assert coalition.members == frozenset() and deficit == 0
    coalition, deficit = max_deficit(star_a, star_a_core_payoff)
    assert deficit == 0
    from matchcore import KnapsackInstance, KnapsackItem, knapsack_to_star

    g, p = knapsack_to_star(KnapsackInstance((KnapsackItem(2, 3), KnapsackItem(1, 4)), 2, 3))
    coalition, deficit = max_deficit(g, p)
    assert coalition.members == {"u", "v2"} and deficit == 1


def test_agent_guard_and_override():
    us = tuple(f"u{i}" for i in range(3))
    vs = tuple(f"v{i}" for i in range(3))
    g = GameInstance(us, vs, {x: 0 for x in us + vs}, ())
    p = payoffs_for(g, {x: 0 for x in g.agents})
    with pytest.raises(GuardError):
        max_deficit(g, p, max_agents=4)
    coalition, deficit = max_deficit(g, p, max_agents=6)
    assert deficit == 0


def test_smallest_bitmask_tie_break():
    # two leaves with identical role; deficit ties must pick the earlier one
    g = GameInstance(("u",), ("v1", "v2"), {"u": 1, "v1": 1, "v2": 1},
                     (Edge("u", "v1", Fraction(3)), Edge("u", "v2", Fraction(3))))
    p = payoffs_for(g, {"u": 0, "v1": 0, "v2": 0})
    coalition, deficit = max_deficit(g, p, max_agents=24)
    assert deficit == 3
    assert coalition.members == {"u", "v1"}


@settings(max_examples=60)
@given(instances(max_u=2, max_v=3, max_cap=2))
def test_worth_is_monotone_and_superadditive(g):
    rng = random.Random(1)
    agents = list(g.agents)
    t_members = [a for a in agents if rng.random() < 0.7]
    s_members = [a for a in t_members if rng.random() < 0.6]
    assert worth(g, Coalition.from_iterable(s_members)) <= worth(g, Coalition.from_iterable(t_members))
    rest = [a for a in agents if a not in t_members]
    lhs = worth(g, Coalition.from_iterable(t_members + rest))
    assert lhs >= worth(g, Coalition.from_iterable(t_members)) + worth(g, Coalition.from_iterable(rest))


@settings(max_examples=50)
@given(instances(max_u=2, max_v=2, max_cap=2))
def test_verdict_agrees_with_max_deficit(g):
    rng = random.Random(3)
    p = random_payoff_split(rng, g, grand_worth(g))
    verdict = check_core_bruteforce(g, p, allow_profit_share=True)
    _, deficit = max_deficit(g, p)
    assert verdict.in_core == (deficit <= 0)
    if not verdict.in_core:
        coalition, d = verdict.witness
        assert coalition_deficit(g, p, coalition) == d > 0


def test_witnesses_recompute_on_random_instances():
    rng = random.Random(5)
    for _ in range(60):
        g = random_instance(rng, max_u=3, max_v=3, max_cap=2)
        p = random_imputation(rng, g)
        verdict = check_core_bruteforce(g, p)
        if not verdict.in_core:
            coalition, d = verdict.witness
            assert coalition_deficit(g, p, coalition) == d > 0


def test_marginal_utility_nonnegative_everywhere():
    rng = random.Random(6)
    for _ in range(40):
        g = random_instance(rng, max_u=3, max_v=3, max_cap=2)
        for vid in g.agents:
            assert marginal_utility(g, vid) >= 0
