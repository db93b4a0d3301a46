"""Feedback-edge-set kernel: degree-1 and degree-2 local rules to fixpoint.

All rules operate on the capacitated kind; uncapacitated inputs are first
reinterpreted with every capacity set to 2, which is lossless for closed
walks (no edge is ever needed more than twice).  Undecided outputs whose
vertices are all waypoints obey the 8k-vertex / 9k-edge bound with k the
residual feedback edge number; chains anchored at avoidable non-waypoint
branch vertices may keep up to three inner vertices.
"""

from __future__ import annotations

from .instance import Edge, Instance, KIND_WRP, as_wrp, compute_fes
from .preprocess import (
    RuleOutcome,
    compress_weights,
    decided_no,
    ensure_connected,
    reduced,
    rr_stop,
    unchanged,
)
from .report import KernelReport


def rr_leaf_cap1(inst: Instance) -> RuleOutcome:
    """A waypoint leaf whose only edge has capacity 1 cannot be entered and left."""
    adj = inst.adjacency()
    for v in sorted(inst.waypoints):
        if len(adj[v]) == 1 and inst.edges[adj[v][0]].capacity == 1:
            return decided_no(f"rr_leaf_cap1: waypoint leaf {v + 1} on a capacity-1 edge")
    return unchanged()


def rr_nonterminal_leaf(inst: Instance) -> RuleOutcome:
    adj = inst.adjacency()
    for v in range(inst.n):
        if v not in inst.waypoints and len(adj[v]) == 1:
            return reduced(inst.remove_vertices({v}), f"rr_nonterminal_leaf: removed {v + 1}")
    return unchanged()


def rr_terminal_leaf(inst: Instance) -> RuleOutcome:
    """Fold a waypoint leaf into its neighbor, paying the edge twice."""
    adj = inst.adjacency()
    for v in sorted(inst.waypoints):
        if len(adj[v]) == 1:
            e = inst.edges[adj[v][0]]
            u = e.other(v)
            out = inst.remove_vertices({v}, budget_delta=-2 * e.weight, add_waypoints={u})
            return reduced(out, f"rr_terminal_leaf: folded {v + 1} into {u + 1}, budget -={2 * e.weight}")
    return unchanged()


def _find_chains(inst: Instance, want_waypoint: bool, min_edges: int):
    """All paths p0..pl, l >= min_edges, whose inner vertices are degree-2
    (non-)waypoints of the requested type.

    Walks outward from a qualifying seed in both directions until a
    non-qualifying vertex anchors the end.  A walk that closes into a cycle
    (pure qualifying cycle, or both ends on the same anchor) is trimmed by
    one edge so the endpoints stay distinct; the rules apply to any
    qualifying path, not only maximal ones.
    """
    adj = inst.adjacency()

    def qualifies(x):
        return len(adj[x]) == 2 and (x in inst.waypoints) == want_waypoint

    done = set()
    for seed in range(inst.n):
        if seed in done or not qualifies(seed):
            continue
        # walk "right" pretending we arrived via adj[seed][0]
        verts, eids = [seed], []
        cur, last = seed, adj[seed][0]
        pure_cycle = False
        while True:
            nxt = adj[cur][0] if adj[cur][0] != last else adj[cur][1]
            w = inst.edges[nxt].other(cur)
            verts.append(w)
            eids.append(nxt)
            if w == seed:
                pure_cycle = True
                break
            if not qualifies(w):
                break
            cur, last = w, nxt
        if pure_cycle:
            verts, eids = verts[:-1], eids[:-1]
        else:
            # walk "left" via the remaining seed edge
            cur, last = seed, eids[0]
            while qualifies(cur):
                nxt = adj[cur][0] if adj[cur][0] != last else adj[cur][1]
                w = inst.edges[nxt].other(cur)
                verts.insert(0, w)
                eids.insert(0, nxt)
                if not qualifies(w):
                    break
                cur, last = w, nxt
            if verts[0] == verts[-1]:  # pendant cycle on one anchor
                verts, eids = verts[:-1], eids[:-1]
        done.update(x for x in verts if qualifies(x))
        if len(eids) >= min_edges and verts[0] != verts[-1]:
            yield verts, eids


def rr_contract_nonterminal_path(inst: Instance) -> RuleOutcome:
    got = next(_find_chains(inst, want_waypoint=False, min_edges=2), None)
    if got is None:
        return unchanged()
    verts, eids = got
    weight = sum(inst.edges[ei].weight for ei in eids)
    cap = min(inst.edges[ei].capacity for ei in eids)
    new_edge = Edge(verts[0], verts[-1], weight, cap)
    out = inst.remove_vertices(set(verts[1:-1]), extra_edges=(new_edge,))
    return reduced(out, f"rr_contract_nonterminal_path: contracted {len(verts) - 2} inner vertex(es)")


def _reduce_terminal_chain(inst: Instance, verts, eids):
    """Replacement plan for one all-waypoint chain, or None if irreducible.

    A solution meets the chain either by walking it once end to end, or by
    doubling a prefix and a suffix around a single skipped edge; any other
    multiplicity pattern leaves an inner waypoint uncovered or stranded.  The
    stand-in edges below realize exactly those options at the same weights
    and with loops attaching at the same endpoints.
    """
    p0, pl = verts[0], verts[-1]
    path_edges = [inst.edges[ei] for ei in eids]
    total = sum(e.weight for e in path_edges)
    cap1 = [i for i, e in enumerate(path_edges) if e.capacity == 1]
    x = verts[1]
    inner = set(verts[1:-1])
    if len(cap1) >= 2:
        # no edge may be skipped: the whole path is walked exactly once
        w1 = path_edges[cap1[0]].weight
        new = [Edge(p0, x, w1, 1), Edge(x, pl, total - w1, 1)]
        return eids, inner - {x}, new, {x}, "a"
    if len(cap1) == 1:
        j = cap1[0]
        w1 = path_edges[j].weight
        if j == 0:
            new = [Edge(p0, x, w1, 1), Edge(x, pl, total - w1, 2)]
            return eids, inner - {x}, new, {x}, "b"
        if j == len(path_edges) - 1:
            new = [Edge(p0, x, total - w1, 2), Edge(x, pl, w1, 1)]
            return eids, inner - {x}, new, {x}, "b"
        if len(eids) == 3:
            return None  # stand-ins would reproduce the chain verbatim
        # skipping the capacity-1 edge strands a loop at each endpoint, so
        # both sides keep their own stand-in vertex
        x2 = verts[2]
        prefix = sum(e.weight for e in path_edges[:j])
        new = [Edge(p0, x, prefix, 2), Edge(x, x2, w1, 1),
               Edge(x2, pl, total - prefix - w1, 2)]
        return eids, inner - {x, x2}, new, {x, x2}, "b"
    # all capacities 2: any single edge may be skipped, cheapest the heaviest.
    # The skip leaves loops hanging at p0 and pl, so the collapsed form is
    # only faithful when both endpoints are themselves visited.
    if p0 in inst.waypoints and pl in inst.waypoints:
        wmax = max(e.weight for e in path_edges)
        new = [Edge(p0, x, wmax, 1), Edge(x, pl, total - wmax, 2),
               Edge(p0, pl, total, 1)]
        return eids, inner - {x}, new, {x}, "c"
    if len(eids) >= 5:
        # endpoints avoidable: reduce the inner subchain, whose ends are waypoints
        return _reduce_terminal_chain(inst, verts[1:-1], eids[1:-1])
    return None


def rr_replace_terminal_path(inst: Instance) -> RuleOutcome:
    for verts, eids in _find_chains(inst, want_waypoint=True, min_edges=3):
        got = _reduce_terminal_chain(inst, verts, eids)
        if got is None:
            continue
        gone, victims, new_edges, new_wps, case = got
        kept = [e for i, e in enumerate(inst.edges) if i not in set(gone)]
        kept.extend(new_edges)
        out = inst.with_edges(kept).remove_vertices(victims, add_waypoints=new_wps)
        if len(out.waypoints) < 2:
            # collapsing would reach the empty-walk special case, which the
            # original chain of spread-out waypoints cannot mimic
            continue
        return reduced(out, f"rr_replace_terminal_path: case {case},"
                            f" replaced {len(victims) + len(new_wps)} inner vertex(es)")
    return unchanged()


FES_RULES = (
    ("rr_leaf_cap1", rr_leaf_cap1),
    ("rr_nonterminal_leaf", rr_nonterminal_leaf),
    ("rr_terminal_leaf", rr_terminal_leaf),
    ("rr_contract_nonterminal_path", rr_contract_nonterminal_path),
    ("rr_replace_terminal_path", rr_replace_terminal_path),
)


def kernelize_fes(inst: Instance) -> tuple[Instance, KernelReport]:
    report = KernelReport(pipeline="fes")
    if inst.kind != KIND_WRP:
        report.log.append(f"reinterpreted {inst.kind} input as wrp with capacities 2")
        inst = as_wrp(inst)
    k_in = len(compute_fes(inst))
    budget0 = inst.budget
    cur = inst
    while True:
        outcome = rr_stop(cur)
        if outcome.decided:
            report.decided = outcome.verdict
            report.fire("rr_stop", outcome.log_entry)
            report.stats["fes_input"] = k_in
            return cur, report
        outcome = ensure_connected(cur)
        if outcome.decided:
            report.decided = outcome.verdict
            report.fire("ensure_connected", outcome.log_entry)
            report.stats["fes_input"] = k_in
            return cur, report
        if outcome.verdict == "reduced":
            report.fire("ensure_connected", outcome.log_entry)
            cur = outcome.instance
            continue
        fired = False
        for name, rule in FES_RULES:
            outcome = rule(cur)
            if outcome.decided:
                report.decided = outcome.verdict
                report.fire(name, outcome.log_entry)
                report.stats["fes_input"] = k_in
                return cur, report
            if outcome.verdict == "reduced":
                report.fire(name, outcome.log_entry)
                cur = outcome.instance
                fired = True
                break
        if not fired:
            break
    outcome = compress_weights(cur)
    if outcome.verdict == "reduced":
        report.fire("compress_weights", outcome.log_entry)
        cur = outcome.instance
    k_out = len(compute_fes(cur))
    report.budget_delta = cur.budget - budget0
    report.stats.update(
        fes_input=k_in,
        fes_output=k_out,
        vertices=cur.n,
        edges=len(cur.edges),
        vertex_bound=8 * k_out,
        edge_bound=9 * k_out,
    )
    return cur, report
