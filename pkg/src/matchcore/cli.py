"""Command-line front end.

Exit codes: 0 for in-core / verified / solved, 1 for not-in-core /
unstable-found / verification-failed (the witness goes to stdout), 2 for
usage or input errors.  Witness coalitions print as sorted id lists and
deficits print exactly, as an integer or ``num/den``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .game import check_core_bruteforce, is_imputation, marginal_utility, max_deficit, worth
from .instance import (
    Coalition,
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
    serialize_instance,
    serialize_payoffs,
    star_center,
)
from .knapsack import parse_knapsack, solve_knapsack
from .reductions import (
    knapsack_to_star,
    partner_duplication,
    star_to_bipartite_gadget,
    verify_fully_matched_lemmas,
    verify_gadget,
    verify_partner_equivalence,
)
from .solver import greedy_star_matching, max_weight_b_matching
from .stars import check_core_star, star_unstable_coalition_dp

_INPUT_ERRORS = (
    FormatError,
    ValidationError,
    GuardError,
    NotAStarError,
    NotAnImputationError,
    OSError,
    KeyError,
)


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_instance(args) -> GameInstance:
    if not args.instance:
        raise FormatError("--instance is required for this subcommand")
    return parse_instance(_read(args.instance))


def _load_payoffs(args, g: GameInstance) -> PayoffVector:
    if not args.payoff:
        raise FormatError("--payoff is required for this subcommand")
    p = parse_payoffs(_read(args.payoff))
    if set(p.payoffs) != set(g.agents):
        raise ValidationError("payoff domain must equal the agent set of the instance")
    return p


def _fmt(value) -> str:
    return str(format_rational(value))


def _print_witness(coalition: Coalition, deficit) -> None:
    print(f"coalition: [{', '.join(sorted(coalition.members))}]")
    print(f"deficit: {_fmt(deficit)}")


def cmd_validate(args) -> int:
    g = _load_instance(args)
    if args.payoff:
        _load_payoffs(args, g)
    if args.coalition:
        s = parse_coalition(_read(args.coalition))
        unknown = s.members - set(g.agents)
        if unknown:
            raise ValidationError(f"coalition member(s) {sorted(unknown)} not in the instance")
    print("OK")
    return 0


def cmd_solve(args) -> int:
    g = _load_instance(args)
    m = max_weight_b_matching(g)
    print(f"value: {_fmt(m.total_weight)}")
    for e in g.edges:
        mult = m.multiplicities.get((e.u, e.v), 0)
        if mult > 0:
            print(f"({e.u}, {e.v}) x{mult}")
    return 0


def cmd_worth(args) -> int:
    g = _load_instance(args)
    if not args.coalition:
        raise FormatError("--coalition is required for worth")
    s = parse_coalition(_read(args.coalition))
    print(f"worth: {_fmt(worth(g, s))}")
    return 0


def cmd_marginals(args) -> int:
    g = _load_instance(args)
    for vid in g.agents:
        print(f"{vid}: {_fmt(marginal_utility(g, vid))}")
    return 0


def _is_star(g: GameInstance) -> bool:
    try:
        star_center(g)
        return True
    except NotAStarError:
        return False


def cmd_check_core(args) -> int:
    g = _load_instance(args)
    p = _load_payoffs(args, g)
    method = args.method
    if method == "auto":
        method = "star" if _is_star(g) and is_imputation(g, p) else "brute"
    if method == "star":
        verdict = check_core_star(g, p)
    else:
        kwargs = {"allow_profit_share": True}
        if args.max_agents is not None:
            kwargs["max_agents"] = args.max_agents
        verdict = check_core_bruteforce(g, p, **kwargs)
    if verdict.in_core:
        print("IN CORE")
        return 0
    print("NOT IN CORE")
    _print_witness(*verdict.witness)
    return 1


def cmd_find_unstable(args) -> int:
    g = _load_instance(args)
    p = _load_payoffs(args, g)
    if args.method == "star-dp":
        found = star_unstable_coalition_dp(g, p)
        if found is None:
            print("NO UNSTABLE COALITION")
            return 0
        print("UNSTABLE")
        _print_witness(*found)
        return 1
    kwargs = {}
    if args.max_agents is not None:
        kwargs["max_agents"] = args.max_agents
    coalition, deficit = max_deficit(g, p, **kwargs)
    if deficit > 0:
        print("UNSTABLE")
        _print_witness(coalition, deficit)
        return 1
    print("NO UNSTABLE COALITION")
    return 0


def cmd_knapsack(args) -> int:
    if not args.instance:
        raise FormatError("--instance is required for knapsack")
    k = parse_knapsack(_read(args.instance))
    sol = solve_knapsack(k)
    print(f"best-value: {sol.best_value}")
    print(f"decision: {'YES' if sol.yes else 'NO'}")
    print(f"witness: [{', '.join(str(i) for i in sol.witness)}]")
    return 0


def cmd_reduce(args) -> int:
    if not args.out:
        raise FormatError("--out PREFIX is required for reduce")
    if args.construction == "knapsack-to-star":
        if not args.instance:
            raise FormatError("--instance (a knapsack file) is required")
        k = parse_knapsack(_read(args.instance))
        g, p = knapsack_to_star(k)
    elif args.construction == "star-to-bipartite":
        g0 = _load_instance(args)
        p0 = _load_payoffs(args, g0)
        g, p = star_to_bipartite_gadget(g0, p0)
    else:  # partner
        g0 = _load_instance(args)
        p0 = _load_payoffs(args, g0)
        g, p = partner_duplication(g0, p0)
    instance_path = Path(f"{args.out}.instance.json")
    payoff_path = Path(f"{args.out}.payoff.json")
    instance_path.write_text(serialize_instance(g))
    payoff_path.write_text(serialize_payoffs(p, g.agents))
    print(f"wrote {instance_path}")
    print(f"wrote {payoff_path}")
    return 0


def cmd_verify(args) -> int:
    g = _load_instance(args)
    p = _load_payoffs(args, g)
    kind = (g.provenance or {}).get("kind")
    kwargs = {}
    if args.max_agents is not None:
        kwargs["max_agents"] = args.max_agents
    if kind == "knapsack_to_star":
        report = verify_fully_matched_lemmas(g, p, **kwargs)
    elif kind == "star_to_bipartite_gadget":
        report = verify_gadget(g, p, brute_force=not args.identities_only, **kwargs)
    elif kind == "partner_duplication":
        prov = g.provenance
        g0 = parse_instance(_json_text(prov["source"]))
        p0 = parse_payoffs(_json_text(prov["source_payoff"]))
        report = verify_partner_equivalence(g0, p0, g, p, **kwargs)
    else:
        raise FormatError(
            "instance carries no recognized provenance; verify needs an "
            "instance produced by one of the reduce subcommands"
        )
    text = report.to_text()
    print(text, end="")
    if args.out:
        Path(args.out).write_text(text)
    return 0 if report.passed else 1


def _json_text(doc: object) -> str:
    return json.dumps(doc)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchcore",
        description="Exact core analysis for bipartite b-matching (transportation) games.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="path to an instance (or knapsack) file")
    common.add_argument("--payoff", help="path to a payoff file")
    common.add_argument("--coalition", help="path to a coalition file")
    common.add_argument("--max-agents", type=int, default=None, help="override enumeration guards")
    common.add_argument("--out", help="output path or prefix")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for sampled checks (current subcommands are deterministic)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common]).set_defaults(func=cmd_validate)
    sub.add_parser("solve", parents=[common]).set_defaults(func=cmd_solve)
    sub.add_parser("worth", parents=[common]).set_defaults(func=cmd_worth)
    sub.add_parser("marginals", parents=[common]).set_defaults(func=cmd_marginals)

    check = sub.add_parser("check-core", parents=[common])
    check.add_argument("--method", choices=["auto", "brute", "star"], default="auto")
    check.set_defaults(func=cmd_check_core)

    find = sub.add_parser("find-unstable", parents=[common])
    find.add_argument("--method", choices=["brute", "star-dp"], default="brute")
    find.set_defaults(func=cmd_find_unstable)

    reduce_p = sub.add_parser("reduce", parents=[common])
    reduce_p.add_argument(
        "construction",
        choices=["knapsack-to-star", "star-to-bipartite", "partner"],
    )
    reduce_p.set_defaults(func=cmd_reduce)

    sub.add_parser("knapsack", parents=[common]).set_defaults(func=cmd_knapsack)

    verify = sub.add_parser("verify", parents=[common])
    verify.add_argument(
        "--identities-only",
        action="store_true",
        help="skip the exponential brute-force stage of gadget verification",
    )
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())
