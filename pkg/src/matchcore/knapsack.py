"""Exact 0-1 knapsack decision oracle.

The decision asked here is strict: an instance is a YES instance when
some selection within the weight capacity has total value strictly
greater than the goal.  The strictness is load-bearing for the
reduction layer, where a coalition is unstable only when its deficit is
strictly positive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .instance import FormatError, GuardError, ValidationError, _load_json

DP_CELL_BUDGET = 10**7


@dataclass(frozen=True)
class KnapsackItem:
    weight: int  # >= 1 so the reduced leaf payoffs stay nonnegative
    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.weight, int) or self.weight < 1:
            raise ValidationError(f"item weight must be an integer >= 1, got {self.weight!r}")
        if not isinstance(self.value, int) or self.value < 0:
            raise ValidationError(f"item value must be a nonnegative integer, got {self.value!r}")


@dataclass(frozen=True)
class KnapsackInstance:
    items: tuple[KnapsackItem, ...]
    capacity: int
    goal: int

    def __post_init__(self) -> None:
        if not isinstance(self.capacity, int) or self.capacity < 0:
            raise ValidationError(f"capacity must be a nonnegative integer, got {self.capacity!r}")
        if not isinstance(self.goal, int) or self.goal < 0:
            raise ValidationError(f"goal must be a nonnegative integer, got {self.goal!r}")


@dataclass(frozen=True)
class KnapsackSolution:
    best_value: int
    yes: bool  # best_value > goal, strictly
    witness: tuple[int, ...]  # item indices achieving best_value


def solve_knapsack(k: KnapsackInstance, cell_budget: int = DP_CELL_BUDGET) -> KnapsackSolution:
    """Tabular DP over capacity; witness reconstructed deterministically
    (ties prefer leaving an item out)."""
    n = len(k.items)
    if n * k.capacity > cell_budget:
        raise GuardError(f"{n}*{k.capacity} DP cells exceed budget {cell_budget}")
    width = k.capacity + 1
    dp = [0] * width
    keep = [bytearray(width) for _ in range(n)]
    for i, item in enumerate(k.items):
        nxt = dp[:]
        for c in range(item.weight, width):
            cand = dp[c - item.weight] + item.value
            if cand > nxt[c]:
                nxt[c] = cand
                keep[i][c] = 1
        dp = nxt
    best = dp[k.capacity]
    witness: list[int] = []
    c = k.capacity
    for i in range(n - 1, -1, -1):
        if keep[i][c]:
            witness.append(i)
            c -= k.items[i].weight
    witness.reverse()
    return KnapsackSolution(best_value=best, yes=best > k.goal, witness=tuple(witness))


def parse_knapsack(text: str) -> KnapsackInstance:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise FormatError("knapsack document: expected an object")
    for key in ("items", "C", "A"):
        if key not in doc:
            raise FormatError(f"knapsack document: missing field {key!r}")
    if not isinstance(doc["items"], list):
        raise FormatError("items: expected an array")
    items = []
    for i, rec in enumerate(doc["items"]):
        if not isinstance(rec, dict) or set(rec) != {"c", "a"}:
            raise FormatError(f"items[{i}]: expected an object with fields 'c' and 'a'")
        if not isinstance(rec["c"], int) or not isinstance(rec["a"], int):
            raise FormatError(f"items[{i}]: 'c' and 'a' must be integers")
        try:
            items.append(KnapsackItem(weight=rec["c"], value=rec["a"]))
        except ValidationError as exc:
            raise FormatError(f"items[{i}]: {exc}") from exc
    if not isinstance(doc["C"], int) or not isinstance(doc["A"], int):
        raise FormatError("'C' and 'A' must be integers")
    try:
        return KnapsackInstance(items=tuple(items), capacity=doc["C"], goal=doc["A"])
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc


def knapsack_to_doc(k: KnapsackInstance) -> dict:
    return {
        "items": [{"c": item.weight, "a": item.value} for item in k.items],
        "C": k.capacity,
        "A": k.goal,
    }


def serialize_knapsack(k: KnapsackInstance) -> str:
    return json.dumps(knapsack_to_doc(k)) + "\n"
