"""Exact data model for transportation-game instances.

A game instance is a weighted bipartite graph with integer vertex
capacities.  Agents are the vertices; the worth of a coalition is the
maximum weight of a capacity-feasible edge multiset on the induced
subgraph.  Everything here is exact: capacities are arbitrary-precision
integers and weights/payoffs are rationals, so core verdicts never
depend on floating-point rounding.

All types are immutable after construction and safe to share between
threads; the operations in this module are pure functions.

File formats (JSON):

* instance: ``{"u_side": [...], "v_side": [...], "capacities": {id: int},
  "edges": [{"u": id, "v": id, "w": int | "num/den"}, ...]}`` plus an
  optional free-form ``provenance`` object attached by generators.
* payoff:   ``{id: int | "num/den", ...}``
* coalition: ``[id, ...]``
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional


class FormatError(ValueError):
    """Malformed document; message carries the offending location."""


class ValidationError(ValueError):
    """Structurally well-formed data violating a model invariant."""


class GuardError(ValueError):
    """Input exceeds a size guard for an exhaustive or DP operation."""


class NotAStarError(ValueError):
    """Operation requires a star instance (one side a singleton)."""


class NotAnImputationError(ValueError):
    """Operation requires payoffs that exhaust the grand-coalition worth."""


_RATIO_RE = re.compile(r"^(-?\d+)/(\d+)$")


def parse_rational(value: object, where: str) -> Fraction:
    """Read an exact rational from an int or a ``"num/den"`` string."""
    if isinstance(value, bool):
        raise FormatError(f"{where}: expected integer or 'num/den' string, got boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIO_RE.match(value)
        if m is None:
            raise FormatError(f"{where}: malformed rational {value!r}, expected 'num/den'")
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise FormatError(f"{where}: zero denominator in {value!r}")
        return Fraction(num, den)
    raise FormatError(f"{where}: expected integer or 'num/den' string, got {type(value).__name__}")


def format_rational(value: Fraction) -> object:
    """Emit an int when integral, else a ``"num/den"`` string."""
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    weight: Fraction


@dataclass(frozen=True)
class GameInstance:
    """Weighted bipartite graph with vertex capacities.

    ``u_side`` and ``v_side`` keep input order; that order is the
    canonical order for serialization and for coalition bitmasks.
    ``provenance`` is an optional free-form block recorded by instance
    generators so verifiers can recompute expected values.
    """

    u_side: tuple[str, ...]
    v_side: tuple[str, ...]
    capacities: dict[str, int]
    edges: tuple[Edge, ...]
    provenance: Optional[dict] = field(default=None, compare=True)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for vid in self.u_side + self.v_side:
            if not isinstance(vid, str) or not vid:
                raise ValidationError(f"vertex id {vid!r}: ids must be non-empty strings")
            if vid in seen:
                raise ValidationError(f"vertex {vid!r}: duplicate id across u_side/v_side")
            seen.add(vid)
        if set(self.capacities) != seen:
            missing = sorted(seen - set(self.capacities))
            extra = sorted(set(self.capacities) - seen)
            raise ValidationError(
                f"capacities: domain must equal the vertex set (missing {missing}, extra {extra})"
            )
        for vid, cap in self.capacities.items():
            if not isinstance(cap, int) or isinstance(cap, bool) or cap < 0:
                raise ValidationError(f"capacities[{vid!r}]: must be a nonnegative integer, got {cap!r}")
        u_set, v_set = set(self.u_side), set(self.v_side)
        pairs: set[tuple[str, str]] = set()
        for idx, e in enumerate(self.edges):
            if e.u not in u_set:
                raise ValidationError(f"edges[{idx}]: endpoint {e.u!r} is not a u_side vertex")
            if e.v not in v_set:
                raise ValidationError(f"edges[{idx}]: endpoint {e.v!r} is not a v_side vertex")
            if (e.u, e.v) in pairs:
                raise ValidationError(f"edges[{idx}]: duplicate edge ({e.u!r}, {e.v!r})")
            pairs.add((e.u, e.v))
            if e.weight < 0:
                raise ValidationError(f"edges[{idx}]: negative weight {e.weight}")

    @property
    def agents(self) -> tuple[str, ...]:
        return self.u_side + self.v_side

    def capacity(self, vertex: str) -> int:
        return self.capacities[vertex]

    def weight(self, u: str, v: str) -> Fraction:
        for e in self.edges:
            if e.u == u and e.v == v:
                return e.weight
        raise KeyError((u, v))


@dataclass(frozen=True)
class Coalition:
    """A subset of agents, hashable and order-free."""

    members: frozenset[str]

    @classmethod
    def of(cls, *ids: str) -> "Coalition":
        return cls(frozenset(ids))

    @classmethod
    def from_iterable(cls, ids: Iterable[str]) -> "Coalition":
        return cls(frozenset(ids))

    def __contains__(self, vid: str) -> bool:
        return vid in self.members

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class PayoffVector:
    """Nonnegative exact profit share, one entry per agent."""

    payoffs: dict[str, Fraction]

    def __post_init__(self) -> None:
        for vid, share in self.payoffs.items():
            if share < 0:
                raise ValidationError(f"payoff[{vid!r}]: negative share {share}")

    def __getitem__(self, vid: str) -> Fraction:
        return self.payoffs[vid]

    def total(self, members: Optional[Iterable[str]] = None) -> Fraction:
        if members is None:
            return sum(self.payoffs.values(), Fraction(0))
        return sum((self.payoffs[m] for m in members), Fraction(0))


@dataclass(frozen=True)
class BMatching:
    """Edge multiset witnessing a worth value.

    ``multiplicities`` holds only the edges used at least once, keyed by
    the (u, v) endpoint pair.
    """

    multiplicities: dict[tuple[str, str], int]
    total_weight: Fraction


def validate_matching(g: GameInstance, m: BMatching) -> None:
    """Raise ValidationError unless ``m`` is feasible for ``g`` and its
    total weight is the exact multiplicity-weighted sum."""
    weights = {(e.u, e.v): e.weight for e in g.edges}
    load: dict[str, int] = {vid: 0 for vid in g.agents}
    total = Fraction(0)
    for pair, mult in m.multiplicities.items():
        if pair not in weights:
            raise ValidationError(f"matching uses unknown edge {pair!r}")
        if not isinstance(mult, int) or mult < 0:
            raise ValidationError(f"matching multiplicity for {pair!r} must be a nonnegative integer")
        load[pair[0]] += mult
        load[pair[1]] += mult
        total += mult * weights[pair]
    for vid, used in load.items():
        if used > g.capacities[vid]:
            raise ValidationError(f"vertex {vid!r}: load {used} exceeds capacity {g.capacities[vid]}")
    if total != m.total_weight:
        raise ValidationError(f"total weight {m.total_weight} != recomputed {total}")


def star_center(g: GameInstance) -> tuple[str, bool]:
    """Return ``(center id, center_on_u_side)`` for a star instance.

    A star has exactly one vertex on one of its sides.  When both sides
    are singletons the u-side vertex is the center.
    """
    if len(g.u_side) == 1:
        return g.u_side[0], True
    if len(g.v_side) == 1:
        return g.v_side[0], False
    raise NotAStarError(
        f"instance with sides {len(g.u_side)}+{len(g.v_side)} is not a star"
    )


def restrict(g: GameInstance, s: Coalition) -> GameInstance:
    """Induced sub-instance on the members of ``s``.

    Keeps input vertex and edge order; capacities are inherited.  The
    provenance block, if any, is not carried over.
    """
    unknown = s.members - set(g.agents)
    if unknown:
        raise ValidationError(f"coalition member(s) {sorted(unknown)} not in the instance")
    u_side = tuple(v for v in g.u_side if v in s.members)
    v_side = tuple(v for v in g.v_side if v in s.members)
    kept = s.members
    return GameInstance(
        u_side=u_side,
        v_side=v_side,
        capacities={vid: g.capacities[vid] for vid in u_side + v_side},
        edges=tuple(e for e in g.edges if e.u in kept and e.v in kept),
    )


def _expect_object(doc: object, where: str) -> dict:
    if not isinstance(doc, dict):
        raise FormatError(f"{where}: expected an object, got {type(doc).__name__}")
    return doc


def _expect_id_array(value: object, where: str) -> tuple[str, ...]:
    if not isinstance(value, list):
        raise FormatError(f"{where}: expected an array of ids")
    out = []
    for i, vid in enumerate(value):
        if not isinstance(vid, str):
            raise FormatError(f"{where}[{i}]: ids must be strings, got {type(vid).__name__}")
        out.append(vid)
    return tuple(out)


def _load_json(text: str) -> object:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def parse_instance(text: str) -> GameInstance:
    """Parse an instance document; round-trips with serialize_instance."""
    doc = _expect_object(_load_json(text), "document")
    for key in ("u_side", "v_side", "capacities", "edges"):
        if key not in doc:
            raise FormatError(f"document: missing field {key!r}")
    unknown = set(doc) - {"u_side", "v_side", "capacities", "edges", "provenance"}
    if unknown:
        raise FormatError(f"document: unknown field(s) {sorted(unknown)}")
    u_side = _expect_id_array(doc["u_side"], "u_side")
    v_side = _expect_id_array(doc["v_side"], "v_side")
    caps_doc = _expect_object(doc["capacities"], "capacities")
    capacities: dict[str, int] = {}
    for vid, cap in caps_doc.items():
        if not isinstance(cap, int) or isinstance(cap, bool):
            raise FormatError(f"capacities[{vid!r}]: expected an integer, got {cap!r}")
        capacities[vid] = cap
    edges_doc = doc["edges"]
    if not isinstance(edges_doc, list):
        raise FormatError("edges: expected an array")
    edges = []
    for i, rec in enumerate(edges_doc):
        rec = _expect_object(rec, f"edges[{i}]")
        for key in ("u", "v", "w"):
            if key not in rec:
                raise FormatError(f"edges[{i}]: missing field {key!r}")
        if not isinstance(rec["u"], str) or not isinstance(rec["v"], str):
            raise FormatError(f"edges[{i}]: endpoints must be id strings")
        edges.append(Edge(rec["u"], rec["v"], parse_rational(rec["w"], f"edges[{i}].w")))
    provenance = doc.get("provenance")
    if provenance is not None and not isinstance(provenance, dict):
        raise FormatError("provenance: expected an object")
    try:
        return GameInstance(u_side, v_side, capacities, tuple(edges), provenance)
    except ValidationError as exc:
        raise FormatError(str(exc)) from exc


def instance_to_doc(g: GameInstance) -> dict:
    doc: dict = {
        "u_side": list(g.u_side),
        "v_side": list(g.v_side),
        "capacities": {vid: g.capacities[vid] for vid in g.agents},
        "edges": [{"u": e.u, "v": e.v, "w": format_rational(e.weight)} for e in g.edges],
    }
    if g.provenance is not None:
        doc["provenance"] = g.provenance
    return doc


def serialize_instance(g: GameInstance) -> str:
    """Canonical document: vertices and edges in stored order."""
    return json.dumps(instance_to_doc(g), indent=2) + "\n"


def parse_payoffs(text: str) -> PayoffVector:
    doc = _expect_object(_load_json(text), "payoff document")
    payoffs: dict[str, Fraction] = {}
    for vid, value in doc.items():
        share = parse_rational(value, f"payoff[{vid!r}]")
        if share < 0:
            raise FormatError(f"payoff[{vid!r}]: negative share {value!r}")
        payoffs[vid] = share
    return PayoffVector(payoffs)


def payoffs_to_doc(p: PayoffVector, order: Optional[Iterable[str]] = None) -> dict:
    ids = list(order) if order is not None else list(p.payoffs)
    return {vid: format_rational(p.payoffs[vid]) for vid in ids}


def serialize_payoffs(p: PayoffVector, order: Optional[Iterable[str]] = None) -> str:
    return json.dumps(payoffs_to_doc(p, order)) + "\n"


def parse_coalition(text: str) -> Coalition:
    doc = _load_json(text)
    return Coalition.from_iterable(_expect_id_array(doc, "coalition"))


def serialize_coalition(s: Coalition) -> str:
    return json.dumps(sorted(s.members)) + "\n"


def payoffs_for(g: GameInstance, values: Mapping[str, object]) -> PayoffVector:
    """Build a payoff vector over exactly the agents of ``g``.

    Values may be ints, Fractions, or ``"num/den"`` strings.
    """
    agents = g.agents
    if set(values) != set(agents):
        raise ValidationError("payoff domain must equal the agent set of the instance")
    payoffs: dict[str, Fraction] = {}
    for vid in agents:
        raw = values[vid]
        payoffs[vid] = raw if isinstance(raw, Fraction) else parse_rational(raw, f"payoff[{vid!r}]")
    return PayoffVector(payoffs)
