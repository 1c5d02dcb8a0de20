"""0-1 knapsack oracle: DP vs subset enumeration, strictness, file format."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchcore import (
    FormatError,
    GuardError,
    KnapsackInstance,
    KnapsackItem,
    ValidationError,
    parse_knapsack,
    serialize_knapsack,
    solve_knapsack,
)


def knap(items, capacity, goal):
    return KnapsackInstance(tuple(KnapsackItem(c, a) for c, a in items), capacity, goal)


def enumerate_best(k: KnapsackInstance) -> int:
    best = 0
    for subset in itertools.product((0, 1), repeat=len(k.items)):
        weight = sum(item.weight for item, take in zip(k.items, subset) if take)
        if weight <= k.capacity:
            best = max(best, sum(item.value for item, take in zip(k.items, subset) if take))
    return best


def test_worked_instance_no():
    sol = solve_knapsack(knap([(2, 3), (1, 4)], 2, 5))
    assert sol.best_value == 4 and sol.yes is False


def test_worked_instance_yes_with_witness():
    sol = solve_knapsack(knap([(2, 3), (1, 4)], 2, 3))
    assert sol.best_value == 4 and sol.yes is True
    assert sol.witness == (1,)


def test_zero_capacity():
    assert solve_knapsack(knap([(1, 5)], 0, 0)) == solve_knapsack(knap([(1, 5)], 0, 0))
    sol = solve_knapsack(knap([(1, 5)], 0, 0))
    assert sol.best_value == 0 and sol.yes is False and sol.witness == ()


def test_strict_comparison_at_the_goal():
    assert solve_knapsack(knap([(1, 4)], 1, 4)).yes is False
    assert solve_knapsack(knap([(1, 4)], 1, 3)).yes is True


def test_witness_achieves_best_value():
    k = knap([(2, 2), (2, 2), (1, 3), (3, 4)], 4, 0)
    sol = solve_knapsack(k)
    assert sum(k.items[i].value for i in sol.witness) == sol.best_value
    assert sum(k.items[i].weight for i in sol.witness) <= k.capacity


def test_budget_guard():
    with pytest.raises(GuardError):
        solve_knapsack(knap([(1, 1)] * 11, 10**6, 0))


def test_item_validation():
    with pytest.raises(ValidationError):
        KnapsackItem(0, 3)
    with pytest.raises(ValidationError):
        KnapsackItem(1, -1)
    with pytest.raises(ValidationError):
        KnapsackInstance((), -1, 0)


@settings(max_examples=150)
@given(
    st.lists(
        st.tuples(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=7)),
        max_size=8,
    ),
    st.integers(min_value=0, max_value=12),
    st.integers(min_value=0, max_value=30),
)
def test_dp_equals_enumeration(items, capacity, goal):
    k = knap(items, capacity, goal)
    sol = solve_knapsack(k)
    best = enumerate_best(k)
    assert sol.best_value == best
    assert sol.yes == (best > goal)
    assert sum(k.items[i].value for i in sol.witness) == best
    assert sum(k.items[i].weight for i in sol.witness) <= capacity


def test_file_round_trip():
    k = knap([(2, 3), (1, 4)], 2, 3)
    assert parse_knapsack(serialize_knapsack(k)) == k


@pytest.mark.parametrize(
    "text, pattern",
    [
        ('{"items": [], "C": 1}', "missing field"),
        ('{"items": [{"c": 0, "a": 1}], "C": 1, "A": 0}', ">= 1"),
        ('{"items": [{"c": 1}], "C": 1, "A": 0}', "fields 'c' and 'a'"),
        ('{"items": [{"c": 1, "a": 1.5}], "C": 1, "A": 0}', "integers"),
        ('{"items": [], "C": "x", "A": 0}', "integers"),
        ("[]", "expected an object"),
    ],
)
def test_malformed_knapsack_documents(text, pattern):
    with pytest.raises(FormatError, match=pattern):
        parse_knapsack(text)
