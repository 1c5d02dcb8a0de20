from __future__ import annotations

from fractions import Fraction

import pytest

from matchcore import Edge, GameInstance, payoffs_for


@pytest.fixture
def star_a() -> GameInstance:
    """Center u (b=2), leaves v1 (w=3, b=1) and v2 (w=2, b=2); worth 5."""
    return GameInstance(
        u_side=("u",),
        v_side=("v1", "v2"),
        capacities={"u": 2, "v1": 1, "v2": 2},
        edges=(Edge("u", "v1", Fraction(3)), Edge("u", "v2", Fraction(2))),
    )


@pytest.fixture
def star_a_core_payoff(star_a):
    return payoffs_for(star_a, {"u": 3, "v1": 1, "v2": 1})


@pytest.fixture
def star_a_noncore_payoff(star_a):
    return payoffs_for(star_a, {"u": "5/2", "v1": "3/2", "v2": 1})
