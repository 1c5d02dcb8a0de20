"""Exact core analysis for edge-unconstrained bipartite b-matching
(transportation) cooperative games."""

from .game import (
    CoreVerdict,
    check_core_bruteforce,
    coalition_deficit,
    grand_worth,
    is_imputation,
    marginal_utility,
    max_deficit,
    worth,
)
from .instance import (
    BMatching,
    Coalition,
    Edge,
    FormatError,
    GameInstance,
    GuardError,
    NotAnImputationError,
    NotAStarError,
    PayoffVector,
    ValidationError,
    format_rational,
    parse_coalition,
    parse_instance,
    parse_payoffs,
    parse_rational,
    payoffs_for,
    restrict,
    serialize_coalition,
    serialize_instance,
    serialize_payoffs,
    star_center,
    validate_matching,
)
from .knapsack import (
    KnapsackInstance,
    KnapsackItem,
    KnapsackSolution,
    parse_knapsack,
    serialize_knapsack,
    solve_knapsack,
)
from .reductions import (
    ReductionCheck,
    ReductionReport,
    knapsack_from_star,
    knapsack_to_star,
    partner_duplication,
    star_to_bipartite_gadget,
    verify_fully_matched_lemmas,
    verify_gadget,
    verify_partner_equivalence,
)
from .solver import brute_force_matching, greedy_star_matching, max_weight_b_matching
from .stars import (
    check_core_star,
    find_diminishing_marginals_violation,
    star_unstable_coalition_dp,
    verify_diminishing_marginals,
)

__version__ = "0.1.0"

__all__ = [
    "BMatching",
    "Coalition",
    "CoreVerdict",
    "Edge",
    "FormatError",
    "GameInstance",
    "GuardError",
    "KnapsackInstance",
    "KnapsackItem",
    "KnapsackSolution",
    "NotAStarError",
    "NotAnImputationError",
    "PayoffVector",
    "ReductionCheck",
    "ReductionReport",
    "ValidationError",
    "brute_force_matching",
    "check_core_bruteforce",
    "check_core_star",
    "coalition_deficit",
    "find_diminishing_marginals_violation",
    "format_rational",
    "grand_worth",
    "greedy_star_matching",
    "is_imputation",
    "knapsack_from_star",
    "knapsack_to_star",
    "marginal_utility",
    "max_deficit",
    "max_weight_b_matching",
    "parse_coalition",
    "parse_instance",
    "parse_knapsack",
    "parse_payoffs",
    "parse_rational",
    "partner_duplication",
    "payoffs_for",
    "restrict",
    "serialize_coalition",
    "serialize_instance",
    "serialize_knapsack",
    "serialize_payoffs",
    "solve_knapsack",
    "star_center",
    "star_to_bipartite_gadget",
    "star_unstable_coalition_dp",
    "validate_matching",
    "verify_diminishing_marginals",
    "verify_fully_matched_lemmas",
    "verify_gadget",
    "verify_partner_equivalence",
    "worth",
]
