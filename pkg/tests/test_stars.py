"""Star characterization, diminishing marginals, and the center-coalition DP."""

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
    NotAStarError,
    ValidationError,
    check_core_bruteforce,
    check_core_star,
    coalition_deficit,
    find_diminishing_marginals_violation,
    marginal_utility,
    max_deficit,
    payoffs_for,
    star_unstable_coalition_dp,
    verify_diminishing_marginals,
)
from matchcore.stars import _best_center_coalition
from matchcore.generators import (
    random_imputation,
    random_star,
    random_star_core_imputation,
    random_star_noncore_imputation,
)

from strategies import stars


def test_check_core_star_examples(star_a, star_a_core_payoff, star_a_noncore_payoff):
    assert check_core_star(star_a, star_a_core_payoff).in_core
    verdict = check_core_star(star_a, star_a_noncore_payoff)
    assert not verdict.in_core
    coalition, deficit = verdict.witness
    # the witness is everyone except the overpaid leaf v1
    assert coalition.members == {"u", "v2"}
    assert deficit == Fraction(1, 2)
    assert coalition_deficit(star_a, star_a_noncore_payoff, coalition) == deficit


def test_single_edge_star_core_is_all_imputations():
    g = GameInstance(("u",), ("v1",), {"u": 1, "v1": 1}, (Edge("u", "v1", Fraction(6)),))
    for share in (0, 1, Fraction(7, 2), 6):
        p = payoffs_for(g, {"u": 6 - Fraction(share), "v1": Fraction(share)})
        assert check_core_star(g, p).in_core


def test_check_core_star_center_on_v_side():
    g = GameInstance(
        ("a", "b"), ("c",), {"a": 1, "b": 2, "c": 2},
        (Edge("a", "c", Fraction(3)), Edge("b", "c", Fraction(2))),
    )
    in_core = payoffs_for(g, {"c": 3, "a": 1, "b": 1})  # worth 5, margins a:1, b:2
    assert check_core_star(g, in_core).in_core
    assert check_core_bruteforce(g, in_core).in_core
    over = payoffs_for(g, {"c": 1, "a": 2, "b": 2})
    assert not check_core_star(g, over).in_core
    assert not check_core_bruteforce(g, over).in_core


def test_check_core_star_preconditions(star_a):
    square = GameInstance(("a", "b"), ("c", "d"), {x: 1 for x in "abcd"}, ())
    with pytest.raises(NotAStarError):
        check_core_star(square, payoffs_for(square, {x: 0 for x in "abcd"}))
    not_imp = payoffs_for(star_a, {"u": 0, "v1": 0, "v2": 0})
    with pytest.raises(NotAnImputationError):
        check_core_star(star_a, not_imp)


def test_star_check_agrees_with_brute_force_randomly():
    rng = random.Random(77)
    for trial in range(200):
        g = random_star(rng, max_leaves=6, max_cap=4, max_weight=10)
        if trial % 2:
            p = random_star_core_imputation(rng, g)
        else:
            p = random_imputation(rng, g)
        fast = check_core_star(g, p)
        slow = check_core_bruteforce(g, p)
        assert fast.in_core == slow.in_core
        if not fast.in_core:
            coalition, deficit = fast.witness
            assert coalition_deficit(g, p, coalition) == deficit > 0


def test_noncore_generator_is_rejected_by_both_checkers():
    rng = random.Random(78)
    produced = 0
    while produced < 40:
        g = random_star(rng, max_leaves=5, max_cap=3, max_weight=9, min_leaves=2)
        p = random_star_noncore_imputation(rng, g)
        if p is None:
            continue
        produced += 1
        assert not check_core_star(g, p).in_core
        assert not check_core_bruteforce(g, p).in_core


def test_diminishing_marginals_worked_star(star_a):
    assert verify_diminishing_marginals(star_a) is True
    assert find_diminishing_marginals_violation(star_a) is None


def test_diminishing_marginals_equal_weights_unit_caps():
    leaves = tuple(f"v{i}" for i in range(1, 5))
    g = GameInstance(
        ("u",), leaves,
        {"u": 2, **{leaf: 1 for leaf in leaves}},
        tuple(Edge("u", leaf, Fraction(4)) for leaf in leaves),
    )
    assert verify_diminishing_marginals(g) is True


def test_diminishing_marginals_sampled_branch():
    rng = random.Random(5)
    g = random_star(rng, max_leaves=12, min_leaves=10, max_cap=3, max_weight=7)
    assert verify_diminishing_marginals(g, trials=300, rng=random.Random(1)) is True


def test_diminishing_marginals_random_stars():
    rng = random.Random(13)
    for _ in range(100):
        g = random_star(rng, max_leaves=6, max_cap=4, max_weight=10)
        assert verify_diminishing_marginals(g) is True


def test_diminishing_marginals_rejects_non_star():
    square = GameInstance(("a", "b"), ("c",), {"a": 1, "b": 1, "c": 1}, ())
    # two u-side vertices with a singleton v-side is still a star (center c)
    assert verify_diminishing_marginals(square) is True
    full = GameInstance(("a", "b"), ("c", "d"), {x: 1 for x in "abcd"}, ())
    with pytest.raises(NotAStarError):
        verify_diminishing_marginals(full)


def test_dp_worked_examples():
    from matchcore import KnapsackInstance, KnapsackItem, knapsack_to_star

    g, p = knapsack_to_star(KnapsackInstance((KnapsackItem(2, 3), KnapsackItem(1, 4)), 2, 3))
    found = star_unstable_coalition_dp(g, p)
    assert found is not None
    coalition, deficit = found
    assert coalition.members == {"u", "v2"} and deficit == 1

    g5, p5 = knapsack_to_star(KnapsackInstance((KnapsackItem(2, 3), KnapsackItem(1, 4)), 2, 5))
    assert star_unstable_coalition_dp(g5, p5) is None


def test_dp_rich_center_sees_no_instability(star_a):
    p = payoffs_for(star_a, {"u": 9, "v1": 0, "v2": 0})
    assert star_unstable_coalition_dp(star_a, p) is None


def test_dp_requires_integers(star_a):
    p = payoffs_for(star_a, {"u": "5/2", "v1": "3/2", "v2": 1})
    with pytest.raises(ValidationError, match="integer"):
        star_unstable_coalition_dp(star_a, p)


def test_dp_budget_guard():
    g = GameInstance(("u",), ("v1",), {"u": 10**6, "v1": 1}, (Edge("u", "v1", Fraction(1)),))
    p = payoffs_for(g, {"u": 0, "v1": 0})
    with pytest.raises(GuardError):
        star_unstable_coalition_dp(g, p)


def test_dp_rejects_non_star():
    square = GameInstance(("a", "b"), ("c", "d"), {x: 1 for x in "abcd"}, ())
    with pytest.raises(NotAStarError):
        star_unstable_coalition_dp(square, payoffs_for(square, {x: 0 for x in "abcd"}))


def test_dp_matches_brute_force_max_over_center_coalitions():
    rng = random.Random(31)
    for _ in range(150):
        g = random_star(rng, max_leaves=6, max_cap=4, max_weight=9)
        p = payoffs_for(g, {vid: rng.randint(0, 6) for vid in g.agents})
        _, dp_deficit = _best_center_coalition(g, p)
        # brute-force the maximum of worth(S) - paid(S) over center coalitions
        best = None
        leaves = g.v_side
        for mask in range(1 << len(leaves)):
            members = ["u", *(leaves[i] for i in range(len(leaves)) if mask >> i & 1)]
            d = coalition_deficit(g, p, Coalition.from_iterable(members))
            best = d if best is None else max(best, d)
        assert dp_deficit == best
        found = star_unstable_coalition_dp(g, p)
        if best > 0:
            coalition, deficit = found
            assert deficit == best
            assert coalition_deficit(g, p, coalition) == deficit
        else:
            assert found is None


def test_dp_value_invariant_under_equal_weight_permutation():
    g = GameInstance(
        ("u",), ("v1", "v2", "v3"),
        {"u": 3, "v1": 2, "v2": 1, "v3": 2},
        (Edge("u", "v1", Fraction(5)), Edge("u", "v2", Fraction(5)), Edge("u", "v3", Fraction(2))),
    )
    permuted = GameInstance(
        ("u",), ("v2", "v1", "v3"),
        g.capacities,
        (Edge("u", "v2", Fraction(5)), Edge("u", "v1", Fraction(5)), Edge("u", "v3", Fraction(2))),
    )
    p = {"u": 2, "v1": 3, "v2": 1, "v3": 1}
    _, d1 = _best_center_coalition(g, payoffs_for(g, p))
    _, d2 = _best_center_coalition(permuted, payoffs_for(permuted, p))
    assert d1 == d2


@settings(max_examples=60)
@given(stars(max_leaves=5, max_cap=3, max_weight=8))
def test_star_verdicts_match_brute_force_property(g):
    rng = random.Random(17)
    p = random_imputation(rng, g)
    assert check_core_star(g, p).in_core == check_core_bruteforce(g, p).in_core


def test_leaf_payment_bounded_by_marginal_utility_iff_in_core():
    rng = random.Random(41)
    for _ in range(80):
        g = random_star(rng, max_leaves=5, max_cap=3, max_weight=8)
        p = random_imputation(rng, g)
        leaves = g.v_side
        within = all(p[leaf] <= marginal_utility(g, leaf) for leaf in leaves)
        assert check_core_star(g, p).in_core == within
