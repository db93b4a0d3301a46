"""Problem-agnostic reductions: stop rules, short-circuiting, connectivity
and positivity normalization, and verified weight compression."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .instance import (
    KIND_SUBTSP,
    Edge,
    Instance,
    InstanceError,
    MAX_WEIGHT,
)

VERDICT_YES = "yes"
VERDICT_NO = "no"
VERDICT_REDUCED = "reduced"
VERDICT_UNCHANGED = "unchanged"


@dataclass(frozen=True)
class RuleOutcome:
    verdict: str
    instance: Instance | None
    log_entry: str

    @property
    def decided(self) -> bool:
        return self.verdict in (VERDICT_YES, VERDICT_NO)


def decided_yes(log: str) -> RuleOutcome:
    return RuleOutcome(VERDICT_YES, None, log)


def decided_no(log: str) -> RuleOutcome:
    return RuleOutcome(VERDICT_NO, None, log)


def reduced(inst: Instance, log: str) -> RuleOutcome:
    return RuleOutcome(VERDICT_REDUCED, inst, log)


def unchanged(log: str = "") -> RuleOutcome:
    return RuleOutcome(VERDICT_UNCHANGED, None, log)


def rr_stop(inst: Instance) -> RuleOutcome:
    if inst.budget < 0:
        return decided_no(f"rr_stop: budget {inst.budget} < 0")
    if len(inst.waypoints) <= 1:
        return decided_yes(f"rr_stop: {len(inst.waypoints)} waypoint(s), empty walk suffices")
    return unchanged()


def rr_short_circuit(inst: Instance, v: int) -> RuleOutcome:
    """Replace a non-waypoint by shortcut edges between its neighbors."""
    if inst.kind != KIND_SUBTSP:
        raise InstanceError("short-circuit rule applies to the subset kind only")
    if v in inst.waypoints:
        raise InstanceError(f"vertex {v} is a waypoint")
    incident = [(i, e) for i, e in enumerate(inst.edges) if v in e.ends()]
    shortcuts: dict[tuple[int, int], int] = {}
    for (i1, e1), (i2, e2) in itertools.combinations(incident, 2):
        a, b = e1.other(v), e2.other(v)
        if a == b:
            continue  # a closed detour through a non-waypoint is never needed
        pair = (min(a, b), max(a, b))
        w = e1.weight + e2.weight
        if pair not in shortcuts or w < shortcuts[pair]:
            shortcuts[pair] = w
    kept = [e for e in inst.edges if v not in e.ends()]
    min_existing: dict[tuple[int, int], int] = {}
    for e in kept:
        pair = (min(e.u, e.v), max(e.u, e.v))
        if pair not in min_existing or e.weight < min_existing[pair]:
            min_existing[pair] = e.weight
    extra, winners = [], set()
    for (a, b), w in sorted(shortcuts.items()):
        if (a, b) in min_existing and min_existing[(a, b)] <= w:
            continue  # an existing parallel edge is at least as cheap
        extra.append(Edge(a, b, w))
        winners.add((a, b))
    kept = [e for e in kept if (min(e.u, e.v), max(e.u, e.v)) not in winners]
    out = inst.with_edges(kept + extra)
    out = out.remove_vertices({v})
    return reduced(out, f"rr_short_circuit: removed vertex {v + 1}, added {len(extra)} shortcut(s)")


def ensure_connected(inst: Instance) -> RuleOutcome:
    comps = inst.components()
    if len(comps) == 1:
        return unchanged()
    holding = [c for c in comps if inst.waypoints & set(c)]
    if len(holding) >= 2:
        return decided_no("ensure_connected: waypoints split across components")
    keep = set(holding[0]) if holding else set(comps[0])
    victims = set(range(inst.n)) - keep
    out = inst.remove_vertices(victims)
    return reduced(out, f"ensure_connected: restricted to the {len(keep)}-vertex waypoint component")


def ensure_positive_weights(inst: Instance) -> RuleOutcome:
    if all(e.weight > 0 for e in inst.edges):
        return unchanged()
    q = inst.total_weight() + 2 * inst.n + 1
    edges = []
    for e in inst.edges:
        w = q * e.weight if e.weight > 0 else 1
        if w > MAX_WEIGHT:
            raise OverflowError("positivity normalization exceeds 63-bit weights")
        edges.append(Edge(e.u, e.v, w, e.capacity))
    budget = q * inst.budget + 2 * inst.n
    if abs(budget) > MAX_WEIGHT:
        raise OverflowError("positivity normalization exceeds 63-bit budget")
    out = inst.with_edges(edges, budget_delta=budget - inst.budget)
    return reduced(out, f"ensure_positive_weights: scaled by Q={q}")


def _bitsize(x: int) -> int:
    return max(1, abs(x).bit_length())


def total_bitsize(weights, budget: int) -> int:
    return sum(_bitsize(w) for w in weights) + _bitsize(budget)


def _sum_profile(weights):
    """All values of w . x for x in {0,1,2}^m, aligned with a fixed x order."""
    m = len(weights)
    total = 3**m
    idx = np.arange(total, dtype=np.int64)
    counts = np.empty((total, m), dtype=np.int8)
    stride = 1
    for i in range(m):
        counts[:, i] = (idx // stride) % 3
        stride *= 3
    if 2 * sum(weights) >= 2**62:
        sums = counts.astype(object) @ np.array(weights, dtype=object)
    else:
        sums = counts @ np.array(weights, dtype=np.int64)
    return sums


def _fit_budget(new_sums, signs):
    """Budget making sign(w'.x - b') match `signs` everywhere, or None."""
    neg = new_sums[signs < 0]
    zero = new_sums[signs == 0]
    pos = new_sums[signs > 0]
    lo = int(neg.max()) if neg.size else None  # b' must be > lo
    hi = int(pos.min()) if pos.size else None  # b' must be < hi
    if zero.size:
        vals = set(int(z) for z in zero)
        if len(vals) != 1:
            return None
        b = vals.pop()
        if (lo is not None and b <= lo) or (hi is not None and b >= hi):
            return None
        return b
    if lo is None and hi is None:
        return None
    if lo is None:
        return hi - 1
    b = lo + 1
    if hi is not None and b >= hi:
        return None
    return b


def compress_weights(inst: Instance, max_edges: int = 12) -> RuleOutcome:
    """Shrink the weight encoding, verified by exhaustive sign-equivalence.

    Candidates: divide by the gcd, then halve repeatedly with rounding.  A
    candidate is kept only when some budget reproduces sign(w.x - b) for
    every x in {0,1,2}^m, so accepted outputs are equivalent by construction.
    """
    m = len(inst.edges)
    if m == 0 or m > max_edges:
        return unchanged("compress_weights: scale guard" if m else "")
    weights = [e.weight for e in inst.edges]
    sums = _sum_profile(weights)
    if sums.dtype == object or abs(inst.budget) >= 2**62:
        b0 = inst.budget
        signs = np.array([(int(s) > b0) - (int(s) < b0) for s in sums], dtype=np.int8)
    else:
        signs = np.sign(sums - inst.budget).astype(np.int8)

    best = None  # (bitsize, weights, budget)
    base = total_bitsize(weights, inst.budget)
    g = math.gcd(*weights, 0) or 1

    def consider(cand):
        nonlocal best
        if all(c == 0 for c in cand):
            return
        b = _fit_budget(_sum_profile(cand), signs)
        if b is None:
            return
        size = total_bitsize(cand, b)
        if size < base and (best is None or size < best[0]):
            best = (size, cand, b)

    scaled = [w // g for w in weights]
    consider(scaled)
    shift = 1
    while max(scaled) >> shift > 0:
        consider([(w + (1 << (shift - 1))) >> shift for w in scaled])
        shift += 1

    if best is None:
        return unchanged("compress_weights: no smaller verified encoding")
    _, new_w, new_b = best
    edges = [Edge(e.u, e.v, w, e.capacity) for e, w in zip(inst.edges, new_w)]
    out = inst.with_edges(edges, budget_delta=new_b - inst.budget)
    return reduced(out, f"compress_weights: bit-size {base} -> {best[0]}")
