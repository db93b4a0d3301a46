"""End-to-end kernelization drivers, one per regime.

Each driver checks the problem kind, acquires the structural decomposition
(hint or search), runs its marking rule to a fixpoint (restarting after
waypoint promotions), and finishes with verified weight compression.  A
Decided verdict at any point short-circuits the run.
"""

from __future__ import annotations

from .fes import kernelize_fes
from .instance import (
    Instance,
    InstanceError,
    KIND_SUBTSP,
    KIND_TSP,
    KIND_WRP,
    REGIME_COMPONENTS,
    REGIME_PATHS,
    compute_vc,
    find_modulator,
)
from .modulator import rule_components_tsp, rule_paths_subtsp, saturate_path_nonterminals
from .preprocess import compress_weights, ensure_connected, rr_stop
from .report import KernelReport
from .vc import rule_vc_tsp, rule_vc_wrp


def _merge(into: KernelReport, part: KernelReport):
    for rule, cnt in part.rule_firings.items():
        into.rule_firings[rule] = into.rule_firings.get(rule, 0) + cnt
    for color, cnt in part.marks.items():
        into.add_marks(color, cnt)
    into.promoted_waypoints.extend(part.promoted_waypoints)
    into.budget_delta += part.budget_delta
    into.stats.update(part.stats)
    into.log.extend(part.log)
    into.decided = part.decided


def _preamble(inst: Instance, report: KernelReport):
    """Stop rules and connectivity; returns (instance, done?)."""
    outcome = rr_stop(inst)
    if outcome.decided:
        report.decided = outcome.verdict
        report.fire("rr_stop", outcome.log_entry)
        return inst, True
    outcome = ensure_connected(inst)
    if outcome.decided:
        report.decided = outcome.verdict
        report.fire("ensure_connected", outcome.log_entry)
        return inst, True
    if outcome.verdict == "reduced":
        report.fire("ensure_connected", outcome.log_entry)
        return outcome.instance, False
    return inst, False


def _finish(inst: Instance, report: KernelReport) -> Instance:
    outcome = compress_weights(inst)
    if outcome.verdict == "reduced":
        report.fire("compress_weights", outcome.log_entry)
        inst = outcome.instance
    report.stats.update(vertices=inst.n, edges=len(inst.edges))
    return inst


def _vertex_cover(inst: Instance, k_max: int | None) -> frozenset[int]:
    pairs = {(min(e.u, e.v), max(e.u, e.v)) for e in inst.edges}
    hint = inst.modulator_hint
    if hint is not None:
        if any(u not in hint and v not in hint for u, v in pairs):
            raise InstanceError("modulator hint is not a vertex cover")
        return hint
    cover = compute_vc(inst, inst.n if k_max is None else k_max)
    if cover is None:
        raise InstanceError(f"no vertex cover within k_max={k_max}")
    return cover


def _with_hint(inst: Instance, M) -> Instance:
    if inst.modulator_hint == frozenset(M):
        return inst
    return Instance(inst.kind, inst.n, inst.edges, inst.waypoints,
                    inst.budget, frozenset(M))


def _rule_loop(inst: Instance, report: KernelReport, rule) -> Instance:
    """Apply `rule(inst, M)` until nothing is removed or promoted."""
    while True:
        out, part = rule(inst, inst.modulator_hint)
        _merge(report, part)
        if report.decided:
            return inst
        changed = part.stats.get("removed", 0) > 0 or part.promoted_waypoints
        inst = _with_hint(out, out.modulator_hint or inst.modulator_hint)
        outcome = rr_stop(inst)
        if outcome.decided:
            report.decided = outcome.verdict
            report.fire("rr_stop", outcome.log_entry)
            return inst
        if not changed:
            return inst


def kernelize_vc_tsp(inst: Instance, k_max: int | None = None) -> tuple[Instance, KernelReport]:
    report = KernelReport(pipeline="vc-tsp")
    if inst.kind != KIND_TSP:
        raise InstanceError("vc-tsp pipeline needs the all-waypoint kind")
    inst, done = _preamble(inst, report)
    if done:
        return inst, report
    inst = _with_hint(inst, _vertex_cover(inst, k_max))
    inst = _rule_loop(inst, report, lambda g, M: rule_vc_tsp(g, M))
    if report.decided:
        return inst, report
    return _finish(inst, report), report


def kernelize_vc_wrp(inst: Instance, k_max: int | None = None) -> tuple[Instance, KernelReport]:
    report = KernelReport(pipeline="vc-wrp")
    if inst.kind != KIND_WRP:
        raise InstanceError("vc-wrp pipeline needs the capacitated kind")
    inst, done = _preamble(inst, report)
    if done:
        return inst, report
    inst = _with_hint(inst, _vertex_cover(inst, k_max))
    inst = _rule_loop(inst, report, lambda g, M: rule_vc_wrp(g, M))
    if report.decided:
        return inst, report
    return _finish(inst, report), report


def kernelize_components_tsp(inst: Instance, r: int,
                             k_max: int | None = None) -> tuple[Instance, KernelReport]:
    report = KernelReport(pipeline="components-tsp")
    if inst.kind != KIND_TSP:
        raise InstanceError("components pipeline needs the all-waypoint kind")
    inst, done = _preamble(inst, report)
    if done:
        return inst, report
    dec = find_modulator(inst, REGIME_COMPONENTS, r, inst.n if k_max is None else k_max)
    if dec is None:
        raise InstanceError(f"no modulator within k_max={k_max}")
    inst = _with_hint(inst, dec.modulator)
    inst = _rule_loop(inst, report, lambda g, M: rule_components_tsp(g, M, r))
    if report.decided:
        return inst, report
    return _finish(inst, report), report


def kernelize_paths_subtsp(inst: Instance, r: int,
                           k_max: int | None = None) -> tuple[Instance, KernelReport]:
    report = KernelReport(pipeline="paths-subtsp")
    if inst.kind != KIND_SUBTSP:
        raise InstanceError("paths pipeline needs the subset kind")
    inst, done = _preamble(inst, report)
    if done:
        return inst, report
    dec = find_modulator(inst, REGIME_PATHS, r, inst.n if k_max is None else k_max)
    if dec is None:
        raise InstanceError(f"no modulator within k_max={k_max}")
    inst = _with_hint(inst, dec.modulator)
    before = inst.n
    inst = saturate_path_nonterminals(inst)
    if inst.n != before:
        report.fire("saturate", f"short-circuited {before - inst.n} non-waypoint(s)")
        inst, done = _preamble(inst, report)
        if done:
            return inst, report
    inst = _rule_loop(inst, report, lambda g, M: rule_paths_subtsp(g, M, r))
    if report.decided:
        return inst, report
    return _finish(inst, report), report


PIPELINES = {
    "fes": lambda inst, r=None, k_max=None: kernelize_fes(inst),
    "vc-tsp": lambda inst, r=None, k_max=None: kernelize_vc_tsp(inst, k_max),
    "vc-wrp": lambda inst, r=None, k_max=None: kernelize_vc_wrp(inst, k_max),
    "components": lambda inst, r=1, k_max=None: kernelize_components_tsp(inst, r, k_max),
    "paths": lambda inst, r=1, k_max=None: kernelize_paths_subtsp(inst, r, k_max),
}
