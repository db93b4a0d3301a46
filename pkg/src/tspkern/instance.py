"""Instance data model, file encoding, and structural decompositions.

Vertices are 0-based internally and 1-based in files.  Parallel edges are
first class; self-loops are forbidden.  Capacities only exist for the
capacitated problem kind ("wrp") and are normalized into {1, 2} on load:
a closed walk never needs an edge more than twice, so larger capacities
carry no information.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

MAX_WEIGHT = 2**63 - 1

KIND_TSP = "tsp"
KIND_SUBTSP = "stsp"
KIND_WRP = "wrp"
KINDS = (KIND_TSP, KIND_SUBTSP, KIND_WRP)


class InstanceError(ValueError):
    """Structurally invalid instance."""


class ParseError(ValueError):
    """Malformed instance file; message carries a 1-based line number."""


class ScaleError(RuntimeError):
    """Requested computation exceeds a configured exhaustive-search cap."""


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: int
    capacity: int | None = None  # None = uncapacitated

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise ValueError(f"vertex {x} not an endpoint of {self}")

    def ends(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Instance:
    kind: str
    n: int
    edges: tuple[Edge, ...]
    waypoints: frozenset[int]
    budget: int
    modulator_hint: frozenset[int] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InstanceError(f"unknown kind {self.kind!r}")
        if self.n < 1:
            raise InstanceError("vertex count must be positive")
        for i, e in enumerate(self.edges):
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise InstanceError(f"edge {i}: endpoint out of range")
            if e.u == e.v:
                raise InstanceError(f"edge {i}: self-loop forbidden")
            if not (0 <= e.weight <= MAX_WEIGHT):
                raise InstanceError(f"edge {i}: weight out of range")
            if self.kind == KIND_WRP:
                if e.capacity not in (1, 2):
                    raise InstanceError(f"edge {i}: wrp capacity must be 1 or 2")
            elif e.capacity is not None:
                raise InstanceError(f"edge {i}: capacity only allowed for wrp")
        for w in self.waypoints:
            if not (0 <= w < self.n):
                raise InstanceError(f"waypoint {w} out of range")
        if self.kind == KIND_TSP and self.waypoints != frozenset(range(self.n)):
            raise InstanceError("tsp requires every vertex to be a waypoint")
        if self.modulator_hint is not None:
            for v in self.modulator_hint:
                if not (0 <= v < self.n):
                    raise InstanceError(f"modulator hint vertex {v} out of range")

    # -- basic graph views -------------------------------------------------

    def adjacency(self) -> list[list[int]]:
        """adj[v] = list of incident edge indices (both directions)."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            adj[e.u].append(i)
            adj[e.v].append(i)
        return adj

    def degree(self, v: int, adj=None) -> int:
        if adj is not None:
            return len(adj[v])
        return sum(1 for e in self.edges for x in (e.u, e.v) if x == v)

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by least vertex."""
        adj = self.adjacency()
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for ei in adj[v]:
                    w = self.edges[ei].other(v)
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def effective_capacity(self, e: Edge) -> int:
        """Usable multiplicity bound under nice solutions."""
        return 2 if e.capacity is None else min(e.capacity, 2)

    def total_weight(self) -> int:
        return sum(e.weight for e in self.edges)

    # -- rebuilding --------------------------------------------------------

    def remove_vertices(self, victims, budget_delta: int = 0,
                        add_waypoints=(), drop_waypoints=(),
                        extra_edges=()) -> "Instance":
        """Delete `victims`, renumber compactly, and adjust the rest.

        `add_waypoints`/`drop_waypoints`/`extra_edges` refer to *old* ids and
        are applied before renumbering.  The modulator hint is remapped; if a
        hint vertex is deleted the hint is dropped.
        """
        victims = set(victims)
        keep = [v for v in range(self.n) if v not in victims]
        if not keep:
            raise InstanceError("cannot delete every vertex")
        remap = {old: new for new, old in enumerate(keep)}
        wps = (set(self.waypoints) | set(add_waypoints)) - set(drop_waypoints)
        wps -= victims
        new_edges = []
        for e in self.edges:
            if e.u in victims or e.v in victims:
                continue
            new_edges.append(Edge(remap[e.u], remap[e.v], e.weight, e.capacity))
        for e in extra_edges:
            if e.u in victims or e.v in victims:
                raise InstanceError("extra edge touches a deleted vertex")
            new_edges.append(Edge(remap[e.u], remap[e.v], e.weight, e.capacity))
        hint = self.modulator_hint
        if hint is not None:
            if hint & victims:
                hint = None
            else:
                hint = frozenset(remap[v] for v in hint)
        return Instance(
            kind=self.kind,
            n=len(keep),
            edges=tuple(new_edges),
            waypoints=frozenset(remap[w] for w in wps),
            budget=self.budget + budget_delta,
            modulator_hint=hint,
        )

    def with_edges(self, edges, budget_delta: int = 0) -> "Instance":
        return replace(self, edges=tuple(edges), budget=self.budget + budget_delta)


def as_wrp(inst: Instance) -> Instance:
    """Reinterpret an uncapacitated instance as wrp with all capacities 2."""
    if inst.kind == KIND_WRP:
        return inst
    edges = tuple(Edge(e.u, e.v, e.weight, 2) for e in inst.edges)
    return replace(inst, kind=KIND_WRP, edges=edges)


# -- file format -----------------------------------------------------------

def parse_instance(text: str) -> Instance:
    kind = None
    n = m = None
    budget = None
    waypoints = None
    hint = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        tag = parts[0]
        try:
            if tag == "p":
                if kind is not None:
                    raise ParseError(f"line {lineno}: duplicate problem line")
                if len(parts) != 4:
                    raise ParseError(f"line {lineno}: expected 'p <kind> <n> <m>'")
                kind = parts[1]
                if kind not in KINDS:
                    raise ParseError(f"line {lineno}: unknown kind {kind!r}")
                n, m = int(parts[2]), int(parts[3])
            elif tag == "b":
                if budget is not None:
                    raise ParseError(f"line {lineno}: duplicate budget line")
                if len(parts) != 2:
                    raise ParseError(f"line {lineno}: expected 'b <budget>'")
                budget = int(parts[1])
            elif tag == "w":
                if kind is None:
                    raise ParseError(f"line {lineno}: waypoint line before problem line")
                if kind == KIND_TSP:
                    raise ParseError(f"line {lineno}: waypoint line forbidden for tsp")
                if waypoints is not None:
                    raise ParseError(f"line {lineno}: duplicate waypoint line")
                waypoints = frozenset(int(x) - 1 for x in parts[1:])
            elif tag == "m":
                if hint is not None:
                    raise ParseError(f"line {lineno}: duplicate modulator line")
                hint = frozenset(int(x) - 1 for x in parts[1:])
            elif tag == "e":
                if kind is None:
                    raise ParseError(f"line {lineno}: edge before problem line")
                if len(parts) not in (4, 5):
                    raise ParseError(f"line {lineno}: expected 'e <u> <v> <w> [<cap>]'")
                u, v, w = int(parts[1]) - 1, int(parts[2]) - 1, int(parts[3])
                cap = None
                if kind == KIND_WRP:
                    cap = min(int(parts[4]), 2) if len(parts) == 5 else 2
                    if cap < 1:
                        raise ParseError(f"line {lineno}: capacity must be positive")
                elif len(parts) == 5:
                    raise ParseError(f"line {lineno}: capacity only allowed for wrp")
                edges.append(Edge(u, v, w, cap))
            else:
                raise ParseError(f"line {lineno}: unknown record {tag!r}")
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if kind is None:
        raise ParseError("missing problem line")
    if budget is None:
        raise ParseError("missing budget line")
    if len(edges) != m:
        raise ParseError(f"problem line promises {m} edges, found {len(edges)}")
    if kind == KIND_TSP:
        waypoints = frozenset(range(n))
    elif waypoints is None:
        waypoints = frozenset()
    try:
        return Instance(kind, n, tuple(edges), waypoints, budget, hint)
    except InstanceError as exc:
        raise ParseError(str(exc)) from exc


def render_instance(inst: Instance) -> str:
    lines = [f"p {inst.kind} {inst.n} {len(inst.edges)}", f"b {inst.budget}"]
    if inst.kind != KIND_TSP:
        lines.append("w " + " ".join(str(w + 1) for w in sorted(inst.waypoints)))
    if inst.modulator_hint is not None:
        lines.append("m " + " ".join(str(v + 1) for v in sorted(inst.modulator_hint)))
    for e in inst.edges:
        u, v = e.u + 1, e.v + 1
        if inst.kind == KIND_WRP:
            lines.append(f"e {u} {v} {e.weight} {e.capacity}")
        else:
            lines.append(f"e {u} {v} {e.weight}")
    return "\n".join(lines) + "\n"


# -- decompositions --------------------------------------------------------

REGIME_VC = "vc"
REGIME_COMPONENTS = "r_components"
REGIME_PATHS = "r_paths"


@dataclass(frozen=True)
class ModulatorDecomposition:
    regime: str
    r: int
    modulator: frozenset[int]
    components: tuple[tuple[int, ...], ...]  # sorted vertex tuples, by least vertex


def compute_fes(inst: Instance) -> list[int]:
    """Indices of non-forest edges under a first-seen spanning forest."""
    parent = list(range(inst.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    fes = []
    for i, e in enumerate(inst.edges):
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            fes.append(i)
        else:
            parent[ru] = rv
    return fes


def _simple_pairs(inst: Instance) -> list[tuple[int, int]]:
    return sorted({(min(e.u, e.v), max(e.u, e.v)) for e in inst.edges})


def compute_vc(inst: Instance, k_max: int) -> frozenset[int] | None:
    """Smallest vertex cover of size <= k_max, or None."""
    pairs = _simple_pairs(inst)

    def exists(uncovered, k, chosen):
        if not uncovered:
            return set(chosen)
        if k == 0:
            return None
        u, v = uncovered[0]
        for pick in (u, v):
            rest = [p for p in uncovered if pick not in p]
            got = exists(rest, k - 1, chosen + [pick])
            if got is not None:
                return got
        return None

    for k in range(k_max + 1):
        got = exists(pairs, k, [])
        if got is not None:
            return frozenset(got)
    return None


def _path_violation(inst: Instance, alive: set[int]) -> list[int] | None:
    """A small vertex set hitting every obstruction to `alive` being disjoint paths."""
    adj = {v: [] for v in alive}
    for e in inst.edges:
        if e.u in alive and e.v in alive:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
    for v in sorted(alive):
        if len(adj[v]) >= 3:
            return [v] + sorted(adj[v])[:3]
    # all degrees <= 2: components are paths or cycles
    seen = set()
    for s in sorted(alive):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        nedges = sum(len(adj[v]) for v in comp) // 2
        if nedges >= len(comp):  # cycle
            return sorted(comp)
    return None


def _component_violation(inst: Instance, alive: set[int], r: int) -> list[int] | None:
    """r+1 connected vertices inside `alive`, if some component is too big."""
    adj = {v: [] for v in alive}
    for e in inst.edges:
        if e.u in alive and e.v in alive:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
    seen = set()
    for s in sorted(alive):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack and len(comp) <= r:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(comp) > r:
            return sorted(comp[: r + 1])
        seen.update(comp)
    return None


def _regime_ok(inst: Instance, modulator, regime: str, r: int) -> bool:
    alive = set(range(inst.n)) - set(modulator)
    if regime == REGIME_COMPONENTS:
        return _component_violation(inst, alive, r) is None
    if regime == REGIME_PATHS:
        if _path_violation(inst, alive) is not None:
            return False
        return _component_violation(inst, alive, r) is None
    raise ValueError(f"unknown regime {regime!r}")


def _decomposition(inst: Instance, modulator, regime: str, r: int) -> ModulatorDecomposition:
    alive = sorted(set(range(inst.n)) - set(modulator))
    sub_index = set(alive)
    adj = {v: [] for v in alive}
    for e in inst.edges:
        if e.u in sub_index and e.v in sub_index:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
    seen, comps = set(), []
    for s in alive:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return ModulatorDecomposition(regime, r, frozenset(modulator), tuple(comps))


def find_modulator(inst: Instance, regime: str, r: int, k_max: int) -> ModulatorDecomposition | None:
    """Smallest modulator putting G minus M into the regime, or None.

    A valid modulator hint on the instance short-circuits the search; an
    invalid hint is an error (a silently wrong hint would poison every
    downstream bound).
    """
    if regime not in (REGIME_COMPONENTS, REGIME_PATHS):
        raise ValueError(f"unknown regime {regime!r}")
    if r < 1:
        raise ValueError("r must be positive")
    if inst.modulator_hint is not None:
        if not _regime_ok(inst, inst.modulator_hint, regime, r):
            raise InstanceError("modulator hint does not satisfy the regime")
        return _decomposition(inst, inst.modulator_hint, regime, r)

    def witness(alive):
        if regime == REGIME_PATHS:
            bad = _path_violation(inst, alive)
            if bad is not None:
                return bad
        return _component_violation(inst, alive, r)

    def search(alive, k):
        bad = witness(alive)
        if bad is None:
            return set()
        if k == 0:
            return None
        for v in bad:
            got = search(alive - {v}, k - 1)
            if got is not None:
                return got | {v}
        return None

    everyone = set(range(inst.n))
    for k in range(k_max + 1):
        got = search(everyone, k)
        if got is not None:
            return _decomposition(inst, got, regime, r)
    return None
