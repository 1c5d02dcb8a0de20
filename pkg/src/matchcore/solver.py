"""Exact maximum-weight b-matching solvers.

Three routes to the same quantity, kept deliberately independent so they
can cross-validate each other:

* ``max_weight_b_matching`` - successive max-gain augmenting paths on a
  flow network (source -> u-vertices -> v-vertices -> sink), the general
  solver used by the game layer.
* ``greedy_star_matching`` - the heaviest-edges-first rule, exact on
  stars only.
* ``brute_force_matching`` - exhaustive enumeration of multiplicity
  assignments, the desk-scale oracle.

Rational weights are scaled by the least common multiple of their
denominators before solving, so the search itself runs on plain
integers; the optimum is unscaled on return.  Zero-weight edges never
enter a solution: the value is unaffected and witnesses stay minimal.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .instance import (
    BMatching,
    GameInstance,
    GuardError,
    NotAStarError,
    star_center,
)

_NEG = -(1 << 62)


class _Network:
    """Integer-scaled view of an instance, reusable across many solves.

    ``value_for_masks`` computes restricted worths for coalition
    bitmasks without rebuilding anything; results are cached by the set
    of active edges (coalitions differing only in isolated vertices
    share a worth).
    """

    __slots__ = (
        "nu", "nv", "cap_u", "cap_v", "scale",
        "edges", "order", "_value_cache",
    )

    def __init__(self, g: GameInstance) -> None:
        self.nu = len(g.u_side)
        self.nv = len(g.v_side)
        uidx = {vid: i for i, vid in enumerate(g.u_side)}
        vidx = {vid: j for j, vid in enumerate(g.v_side)}
        self.cap_u = [g.capacities[vid] for vid in g.u_side]
        self.cap_v = [g.capacities[vid] for vid in g.v_side]
        self.scale = math.lcm(*(e.weight.denominator for e in g.edges)) if g.edges else 1
        # (u index, v index, scaled weight, original edge position); w=0 dropped
        self.edges = [
            (uidx[e.u], vidx[e.v], int(e.weight * self.scale), pos)
            for pos, e in enumerate(g.edges)
            if e.weight > 0
        ]
        self.order = sorted(range(len(self.edges)), key=lambda k: (-self.edges[k][2], k))
        self._value_cache: dict[int, int] = {}

    def full_masks(self) -> tuple[int, int]:
        return (1 << self.nu) - 1, (1 << self.nv) - 1

    def solve(self, umask: int | None = None, vmask: int | None = None) -> tuple[list[int], int]:
        """Max-gain augmentation; returns per-edge multiplicities and the
        scaled optimum.  On return no residual source-sink path has a
        strictly positive gain."""
        if umask is None or vmask is None:
            umask, vmask = self.full_masks()
        edges = [e for e in self.edges if (umask >> e[0]) & 1 and (vmask >> e[1]) & 1]
        cap_u, cap_v = self.cap_u, self.cap_v
        nu, nv, m = self.nu, self.nv, len(edges)
        x = [0] * m
        used_u = [0] * nu
        used_v = [0] * nv
        while True:
            du = [0 if (umask >> i) & 1 and used_u[i] < cap_u[i] else _NEG for i in range(nu)]
            dv = [_NEG] * nv
            pred_u = [-2 if du[i] == 0 else -1 for i in range(nu)]
            pred_v = [-1] * nv
            for _ in range(nu + nv + 2):
                changed = False
                for k in range(m):
                    i, j, w, _ = edges[k]
                    cap_e = min(cap_u[i], cap_v[j])
                    di = du[i]
                    if x[k] < cap_e and di > _NEG and di + w > dv[j]:
                        dv[j] = di + w
                        pred_v[j] = k
                        changed = True
                    dj = dv[j]
                    if x[k] > 0 and dj > _NEG and dj - w > du[i]:
                        du[i] = dj - w
                        pred_u[i] = k
                        changed = True
                if not changed:
                    break
            else:
                raise AssertionError("gain labels failed to converge")
            best_gain, best_j = 0, -1
            for j in range(nv):
                if (vmask >> j) & 1 and used_v[j] < cap_v[j] and dv[j] > best_gain:
                    best_gain, best_j = dv[j], j
            if best_j < 0:
                break
            path: list[tuple[int, bool]] = []
            j = best_j
            for _ in range(2 * m + 2):
                k = pred_v[j]
                path.append((k, True))
                i = edges[k][0]
                if pred_u[i] == -2:
                    start_u = i
                    break
                k2 = pred_u[i]
                path.append((k2, False))
                j = edges[k2][1]
            else:
                raise AssertionError("augmenting path reconstruction looped")
            delta = min(cap_u[start_u] - used_u[start_u], cap_v[best_j] - used_v[best_j])
            for k, forward in path:
                i, j2, _, _ = edges[k]
                if forward:
                    delta = min(delta, min(cap_u[i], cap_v[j2]) - x[k])
                else:
                    delta = min(delta, x[k])
            for k, forward in path:
                x[k] += delta if forward else -delta
            used_u[start_u] += delta
            used_v[best_j] += delta
        value = sum(x[k] * edges[k][2] for k in range(m))
        mults_by_pos = {edges[k][3]: x[k] for k in range(m)}
        return [mults_by_pos.get(e[3], 0) for e in self.edges], value

    def value_for_masks(self, umask: int, vmask: int) -> int:
        """Scaled worth of the coalition given by side bitmasks."""
        active: list[int] = []
        emask = 0
        seen_u = 0
        seen_v = 0
        for k in self.order:
            i, j, _, _ = self.edges[k]
            if (umask >> i) & 1 and (vmask >> j) & 1:
                active.append(k)
                emask |= 1 << k
                seen_u |= 1 << i
                seen_v |= 1 << j
        if not active:
            return 0
        cached = self._value_cache.get(emask)
        if cached is not None:
            return cached
        if seen_u & (seen_u - 1) == 0:
            value = self._greedy_value(active, self.cap_u[seen_u.bit_length() - 1], leaf_on_v=True)
        elif seen_v & (seen_v - 1) == 0:
            value = self._greedy_value(active, self.cap_v[seen_v.bit_length() - 1], leaf_on_v=False)
        else:
            _, value = self.solve(umask, vmask)
        self._value_cache[emask] = value
        return value

    def _greedy_value(self, active: list[int], center_cap: int, leaf_on_v: bool) -> int:
        remaining = center_cap
        value = 0
        for k in active:  # already in weight-descending order
            if remaining == 0:
                break
            i, j, w, _ = self.edges[k]
            take = min(self.cap_v[j] if leaf_on_v else self.cap_u[i], remaining)
            value += take * w
            remaining -= take
        return value


def _network(g: GameInstance) -> _Network:
    return _Network(g)


def _as_matching(g: GameInstance, mults_by_pos: dict[int, int], scaled: int, scale: int) -> BMatching:
    multiplicities = {
        (e.u, e.v): mults_by_pos[pos]
        for pos, e in enumerate(g.edges)
        if mults_by_pos.get(pos, 0) > 0
    }
    return BMatching(multiplicities=multiplicities, total_weight=Fraction(scaled, scale))


def max_weight_b_matching(g: GameInstance) -> BMatching:
    """Maximum-weight capacity-feasible edge multiset of ``g``."""
    net = _Network(g)
    mults, value = net.solve()
    by_pos = {net.edges[k][3]: mults[k] for k in range(len(net.edges))}
    return _as_matching(g, by_pos, value, net.scale)


def greedy_star_matching(g: GameInstance) -> BMatching:
    """Heaviest-edges-first matching; exact for stars.

    Edge copies are taken in nonincreasing weight order (ties by input
    order), each leaf contributing up to its capacity, until the center
    capacity is exhausted.
    """
    center, on_u = star_center(g)
    remaining = g.capacities[center]
    order = sorted(range(len(g.edges)), key=lambda p: (-g.edges[p].weight, p))
    by_pos: dict[int, int] = {}
    total = Fraction(0)
    for pos in order:
        if remaining == 0:
            break
        e = g.edges[pos]
        if e.weight == 0:
            break  # sorted order: everything from here on adds nothing
        leaf = e.v if on_u else e.u
        take = min(g.capacities[leaf], remaining)
        if take > 0:
            by_pos[pos] = take
            total += take * e.weight
            remaining -= take
    multiplicities = {
        (e.u, e.v): by_pos[pos] for pos, e in enumerate(g.edges) if by_pos.get(pos, 0) > 0
    }
    return BMatching(multiplicities=multiplicities, total_weight=total)


def brute_force_matching(g: GameInstance, max_total_capacity: int = 16) -> BMatching:
    """Exhaustive oracle: tries every integral multiplicity assignment.

    Guarded by the total u-side capacity; meant for cross-validation at
    desk scale, not for real solving.
    """
    total_u = sum(g.capacities[vid] for vid in g.u_side)
    if total_u > max_total_capacity:
        raise GuardError(
            f"total u-side capacity {total_u} exceeds brute-force guard {max_total_capacity}"
        )
    scale = math.lcm(*(e.weight.denominator for e in g.edges)) if g.edges else 1
    edges = [
        (e.u, e.v, int(e.weight * scale), pos)
        for pos, e in enumerate(g.edges)
        if e.weight > 0
    ]
    rem = {vid: g.capacities[vid] for vid in g.agents}
    m = len(edges)
    x = [0] * m
    best_value = 0
    best_x: list[int] = list(x)

    def explore(idx: int, value: int) -> None:
        nonlocal best_value, best_x
        if idx == m:
            if value > best_value:
                best_value = value
                best_x = x[:]
            return
        u, v, w, _ = edges[idx]
        hi = min(rem[u], rem[v])
        for mult in range(hi + 1):
            x[idx] = mult
            rem[u] -= mult
            rem[v] -= mult
            explore(idx + 1, value + mult * w)
            rem[u] += mult
            rem[v] += mult
        x[idx] = 0

    explore(0, 0)
    by_pos = {edges[k][3]: best_x[k] for k in range(m)}
    return _as_matching(g, by_pos, best_value, scale)
