"""Exact ground-truth solvers and solution-normalization utilities.

A solution is certified as an Eulerian multigraph: a multiplicity per edge
such that every degree is even, the support is connected and covers all
waypoints, capacities are respected, and the weight fits the budget.  With
at most one waypoint the empty multigraph is the (unique) solution.

Three exact engines, all desk-scale and guarded by explicit caps:
  * solve_exact_multiplicity - enumerate multiplicity vectors in {0,1,2}^m.
  * solve_heldkarp           - subset DP on the waypoint metric closure
                               (uncapacitated kinds only).
  * solve_treewidth          - connectivity/parity DP over a tree
                               decomposition; exact, handles all kinds,
                               reaches instances the other engines cannot.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .instance import (
    KIND_TSP,
    KIND_SUBTSP,
    KIND_WRP,
    Edge,
    Instance,
    ScaleError,
)


@dataclass(frozen=True)
class SolutionMultigraph:
    multiplicity: tuple[int, ...]
    total_weight: int


@dataclass(frozen=True)
class OptResult:
    feasible: bool
    opt_weight: int | None
    witness: SolutionMultigraph | None


@dataclass(frozen=True)
class OracleCaps:
    multiplicity_edges: int = 14
    heldkarp_waypoints: int = 18
    treewidth_width: int = 8


DEFAULT_CAPS = OracleCaps()


def make_solution(inst: Instance, multiplicity) -> SolutionMultigraph:
    mult = tuple(multiplicity)
    if len(mult) != len(inst.edges):
        raise ValueError("multiplicity vector length != edge count")
    weight = sum(m * e.weight for m, e in zip(mult, inst.edges))
    return SolutionMultigraph(mult, weight)


def empty_solution(inst: Instance) -> SolutionMultigraph:
    return SolutionMultigraph((0,) * len(inst.edges), 0)


def _support_connected(inst: Instance, mult) -> bool:
    """Support (positive-degree vertices) connected and covering all waypoints."""
    deg = [0] * inst.n
    for m, e in zip(mult, inst.edges):
        if m > 0:
            deg[e.u] += m
            deg[e.v] += m
    support = [v for v in range(inst.n) if deg[v] > 0]
    if any(deg[w] == 0 for w in inst.waypoints):
        return False
    if not support:
        return True
    adj = {v: [] for v in support}
    for m, e in zip(mult, inst.edges):
        if m > 0:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
    seen = {support[0]}
    stack = [support[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(support)


def check_certificate(inst: Instance, sol: SolutionMultigraph) -> bool:
    if len(sol.multiplicity) != len(inst.edges):
        raise ValueError("multiplicity vector length != edge count")
    if len(inst.waypoints) <= 1 and all(m == 0 for m in sol.multiplicity):
        return 0 <= inst.budget
    deg = [0] * inst.n
    for m, e in zip(sol.multiplicity, inst.edges):
        if m < 0:
            return False
        if e.capacity is not None and m > e.capacity:
            return False
        deg[e.u] += m
        deg[e.v] += m
    if any(d % 2 for d in deg):
        return False
    if not _support_connected(inst, sol.multiplicity):
        return False
    return sol.total_weight <= inst.budget


# -- engine 1: multiplicity enumeration -------------------------------------

def solve_exact_multiplicity(inst: Instance, caps: OracleCaps = DEFAULT_CAPS) -> OptResult:
    m = len(inst.edges)
    if m > caps.multiplicity_edges:
        raise ScaleError(f"oracle scale exceeded: {m} edges > cap {caps.multiplicity_edges}")
    if len(inst.waypoints) <= 1:
        return OptResult(0 <= inst.budget, 0, empty_solution(inst))
    if m == 0:
        return OptResult(False, None, None)

    touched = sorted({v for e in inst.edges for v in e.ends()})
    if any(w not in set(touched) for w in inst.waypoints):
        return OptResult(False, None, None)
    col = {v: i for i, v in enumerate(touched)}

    bases = [inst.effective_capacity(e) + 1 for e in inst.edges]
    total = int(np.prod(bases))
    idx = np.arange(total, dtype=np.int64)
    counts = np.empty((total, m), dtype=np.int8)
    stride = 1
    for i in range(m):
        counts[:, i] = (idx // stride) % bases[i]
        stride *= bases[i]

    # degree parity and waypoint coverage, vectorized over touched vertices
    inc = np.zeros((m, len(touched)), dtype=np.int8)
    for i, e in enumerate(inst.edges):
        inc[i, col[e.u]] += 1
        inc[i, col[e.v]] += 1
    deg = counts @ inc
    ok = ((deg & 1) == 0).all(axis=1)
    wps = [col[w] for w in sorted(inst.waypoints)]
    ok &= (deg[:, wps] > 0).all(axis=1)
    cand = np.nonzero(ok)[0]
    if cand.size == 0:
        return OptResult(False, None, None)

    big = 2 * inst.total_weight() >= 2**62
    if big:
        ws = [e.weight for e in inst.edges]
        weights = np.array(
            [sum(int(c) * w for c, w in zip(counts[j], ws)) for j in cand], dtype=object
        )
        order = sorted(range(len(cand)), key=lambda j: (weights[j], int(cand[j])))
    else:
        w = np.array([e.weight for e in inst.edges], dtype=np.int64)
        weights = counts[cand] @ w
        order = np.lexsort((cand, weights))

    powers = np.int64(1) << np.arange(m, dtype=np.int64)
    conn_cache: dict[int, bool] = {}
    for j in order:
        row = counts[cand[j]]
        key = int((row > 0) @ powers)
        hit = conn_cache.get(key)
        if hit is None:
            hit = _support_connected(inst, [int(x) for x in row])
            conn_cache[key] = hit
        if hit:
            sol = make_solution(inst, (int(x) for x in row))
            return OptResult(sol.total_weight <= inst.budget, sol.total_weight, sol)
    return OptResult(False, None, None)


# -- engine 2: Held-Karp on the waypoint metric closure ----------------------

def _apsp_with_paths(inst: Instance):
    """Floyd-Warshall; returns dist and a path expander yielding edge indices."""
    INF = float("inf")
    n = inst.n
    direct = [[None] * n for _ in range(n)]  # cheapest direct edge index
    dist = [[INF] * n for _ in range(n)]
    for v in range(n):
        dist[v][v] = 0
    for i, e in enumerate(inst.edges):
        if e.weight < dist[e.u][e.v]:
            dist[e.u][e.v] = dist[e.v][e.u] = e.weight
            direct[e.u][e.v] = direct[e.v][e.u] = i
    via = [[None] * n for _ in range(n)]
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == INF:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
                    via[i][j] = k

    def expand(i, j):
        if i == j:
            return []
        k = via[i][j]
        if k is None:
            return [direct[i][j]]
        return expand(i, k) + expand(k, j)

    return dist, expand


def solve_heldkarp(inst: Instance, caps: OracleCaps = DEFAULT_CAPS) -> OptResult:
    if inst.kind == KIND_WRP:
        raise ValueError("capacities unsupported by this engine")
    wps = sorted(inst.waypoints)
    ell = len(wps)
    if ell > caps.heldkarp_waypoints:
        raise ScaleError(f"oracle scale exceeded: {ell} waypoints > cap {caps.heldkarp_waypoints}")
    if ell <= 1:
        return OptResult(0 <= inst.budget, 0, empty_solution(inst))

    dist, expand = _apsp_with_paths(inst)
    INF = float("inf")
    d = [[dist[a][b] for b in wps] for a in wps]
    if any(d[0][j] == INF for j in range(ell)):
        return OptResult(False, None, None)

    full = (1 << ell) - 1
    dp = {(1, 0): (0, None)}
    for mask in range(1, full + 1):
        if not mask & 1:
            continue
        for last in range(ell):
            if not mask >> last & 1:
                continue
            cur = dp.get((mask, last))
            if cur is None:
                continue
            base = cur[0]
            for nxt in range(ell):
                if mask >> nxt & 1:
                    continue
                cand = base + d[last][nxt]
                key = (mask | 1 << nxt, nxt)
                if key not in dp or cand < dp[key][0]:
                    dp[key] = (cand, last)

    best, best_last = None, None
    for last in range(ell):
        entry = dp.get((full, last))
        if entry is None:
            continue
        cand = entry[0] + d[last][0]
        if best is None or cand < best:
            best, best_last = cand, last
    if best is None:
        return OptResult(False, None, None)

    # walk the DP parents back into a waypoint tour, then expand to edges
    tour = [best_last]
    mask = full
    while tour[-1] != 0 or mask != 1:
        prev = dp[(mask, tour[-1])][1]
        mask ^= 1 << tour[-1]
        tour.append(prev)
    tour.reverse()  # starts at waypoint 0
    mult = Counter()
    for a, b in zip(tour, tour[1:] + [tour[0]]):
        for ei in expand(wps[a], wps[b]):
            mult[ei] += 1
    sol = make_solution(inst, (mult.get(i, 0) for i in range(len(inst.edges))))
    assert sol.total_weight == best
    return OptResult(best <= inst.budget, int(best), sol)


# -- normalization -----------------------------------------------------------

def find_component_preserving_cycle(inst: Instance, sol: SolutionMultigraph) -> list[int]:
    """A cycle (edge indices, with repetition) whose removal keeps the
    component partition of the support, per the maximal-forest argument."""
    instances = []
    for i, m in enumerate(sol.multiplicity):
        instances.extend([i] * m)
    support = set()
    for i in instances:
        support.add(inst.edges[i].u)
        support.add(inst.edges[i].v)
    if len(instances) <= 2 * len(support) - 2:
        raise ValueError("multigraph has too few edges for a removable cycle")

    parent = {v: v for v in support}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rest = []
    for i in instances:
        e = inst.edges[i]
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            rest.append(i)
        else:
            parent[ru] = rv

    # parallel pair inside the remainder is already a cycle
    seen_pair = {}
    for i in rest:
        e = inst.edges[i]
        pair = (min(e.u, e.v), max(e.u, e.v))
        if pair in seen_pair:
            return [seen_pair[pair], i]
        seen_pair[pair] = i

    # no parallel pairs remain, so a plain DFS over distinct pairs suffices
    adj = {}
    for pos, i in enumerate(rest):
        e = inst.edges[i]
        adj.setdefault(e.u, []).append((e.v, pos))
        adj.setdefault(e.v, []).append((e.u, pos))
    visited = set()
    for s in adj:
        if s in visited:
            continue
        trail = {s: (None, None)}  # vertex -> (dfs parent, arrival edge pos)
        visited.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for w, pos in adj[v]:
                if pos == trail[v][1]:
                    continue  # the tree edge back to the parent
                if w in trail:
                    # non-tree edge: both endpoints have tree paths to the
                    # DFS root; join them at their lowest common ancestor
                    anc = {}
                    x = v
                    while x is not None:
                        anc[x] = trail[x][1]
                        x = trail[x][0]
                    cycle = [rest[pos]]
                    x = w
                    while x not in anc:
                        cycle.append(rest[trail[x][1]])
                        x = trail[x][0]
                    lca = x
                    x = v
                    while x != lca:
                        cycle.append(rest[trail[x][1]])
                        x = trail[x][0]
                    return cycle
                trail[w] = (v, pos)
                visited.add(w)
                stack.append(w)
    raise AssertionError("remainder of a maximal forest must contain a cycle")


def make_nice(inst: Instance, sol: SolutionMultigraph) -> SolutionMultigraph:
    if not check_certificate(inst, sol):
        raise ValueError("make_nice requires a valid certificate")
    mult = list(sol.multiplicity)
    changed = True
    while changed:
        changed = False
        for i, m in enumerate(mult):
            if m >= 3:
                mult[i] = m - 2
                changed = True
        cur = make_solution(inst, mult)
        while sum(mult) > 2 * inst.n:
            cycle = find_component_preserving_cycle(inst, cur)
            for i in cycle:
                mult[i] -= 1
            cur = make_solution(inst, mult)
            changed = True
    out = make_solution(inst, mult)
    assert check_certificate(inst, out)
    assert out.total_weight <= sol.total_weight
    return out


# -- walks and segments ------------------------------------------------------

@dataclass(frozen=True)
class Walk:
    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.edge_ids) + 1:
            raise ValueError("walk shape mismatch")

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]


def euler_walk(inst: Instance, sol: SolutionMultigraph, start: int) -> Walk:
    """Closed Euler walk over the solution multigraph, Hierholzer style."""
    remaining = list(sol.multiplicity)
    if sum(remaining) == 0:
        return Walk((start,), ())
    adj = [[] for _ in range(inst.n)]
    for i, e in enumerate(inst.edges):
        if remaining[i]:
            adj[e.u].append(i)
            adj[e.v].append(i)
    if not adj[start]:
        raise ValueError("start vertex not in the support")
    # stack-based Hierholzer over edge instances
    path_v, path_e = [], []
    stack = [(start, None)]
    while stack:
        v, via = stack[-1]
        picked = None
        for i in adj[v]:
            if remaining[i]:
                picked = i
                break
        if picked is None:
            stack.pop()
            path_v.append(v)
            path_e.append(via)
        else:
            remaining[picked] -= 1
            stack.append((inst.edges[picked].other(v), picked))
    path_v.reverse()
    path_e.reverse()
    assert path_e[0] is None
    walk = Walk(tuple(path_v), tuple(path_e[1:]))
    assert walk.closed and sum(sol.multiplicity) == len(walk.edge_ids)
    for a, b, ei in zip(walk.vertices, walk.vertices[1:], walk.edge_ids):
        assert {a, b} == set(inst.edges[ei].ends())
    return walk


def split_into_segments(inst: Instance, walk: Walk, M) -> list[Walk]:
    M = set(M)
    if walk.vertices[0] not in M:
        raise ValueError("walk must start at a modulator vertex")
    if not walk.closed:
        raise ValueError("walk must be closed")
    segments = []
    seg_v, seg_e = [walk.vertices[0]], []
    for v, e in zip(walk.vertices[1:], walk.edge_ids):
        seg_v.append(v)
        seg_e.append(e)
        if v in M:
            segments.append(Walk(tuple(seg_v), tuple(seg_e)))
            seg_v, seg_e = [v], []
    if seg_e:
        raise ValueError("closed walk from M must end in M")
    return segments


def solution_component_behavior(inst: Instance, walk: Walk, M, C):
    """Edge multiset F(S,C): segments discovering a new C-vertex, in order."""
    from .modulator import ComponentBehavior  # deferred: avoids an import cycle

    Cset = set(C)
    visited = set()
    edges = Counter()
    for seg in split_into_segments(inst, walk, M):
        here = {v for v in seg.vertices if v in Cset}
        if here - visited:
            edges.update(seg.edge_ids)
        visited |= here
    flat = tuple(sorted(itertools.chain.from_iterable([i] * c for i, c in edges.items())))
    weight = sum(inst.edges[i].weight * c for i, c in edges.items())
    return ComponentBehavior(component=-1, edges=flat, weight=weight)


# -- engine 3: tree-decomposition DP -----------------------------------------

def _edge_cap(inst: Instance, e: Edge) -> int:
    return inst.effective_capacity(e)


def solve_treewidth(inst: Instance, caps: OracleCaps = DEFAULT_CAPS) -> OptResult:
    """Exact minimum-weight certificate via DP over a tree decomposition.

    Tracks per-bag degree parity and a partition of used bag vertices into
    connected blocks; a block may be sealed (forgotten entirely) only once,
    giving the single component that must cover every waypoint.
    """
    if len(inst.waypoints) <= 1:
        return OptResult(0 <= inst.budget, 0, empty_solution(inst))

    G = nx.Graph()
    G.add_nodes_from(range(inst.n))
    G.add_edges_from((e.u, e.v) for e in inst.edges)
    width, tree = nx.algorithms.approximation.treewidth_min_fill_in(G)
    if width > caps.treewidth_width:
        raise ScaleError(f"oracle scale exceeded: decomposition width {width} > cap {caps.treewidth_width}")

    bags = list(tree.nodes)
    root = bags[0]
    # assign each edge to one bag containing both endpoints (DFS preorder)
    order = list(nx.dfs_preorder_nodes(tree, root)) if len(bags) > 1 else [root]
    edge_home: dict[int, object] = {}
    for i, e in enumerate(inst.edges):
        for bag in order:
            if e.u in bag and e.v in bag:
                edge_home[i] = bag
                break
        else:
            raise AssertionError("tree decomposition misses an edge")

    ops: list[tuple] = []  # ("leaf"|"intro"|"forget"|"edge"|"join", payload)

    def emit_adapt(from_bag, to_bag):
        for v in sorted(from_bag - to_bag):
            ops.append(("forget", v))
        for v in sorted(to_bag - from_bag):
            ops.append(("intro", v))

    def build(bag, parent):
        children = [b for b in tree.neighbors(bag) if b != parent]
        if not children:
            ops.append(("leaf", None))
            for v in sorted(bag):
                ops.append(("intro", v))
        else:
            build(children[0], bag)
            emit_adapt(children[0], bag)
            for ch in children[1:]:
                build(ch, bag)
                emit_adapt(ch, bag)
                ops.append(("join", None))
        for i, e in enumerate(inst.edges):
            if edge_home.get(i) == bag:
                ops.append(("edge", i))

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(bags) + 100))
    try:
        build(root, None)
    finally:
        sys.setrecursionlimit(old)
    for v in sorted(root):
        ops.append(("forget", v))

    return _run_tw_dp(inst, ops)


def _canon(blocks):
    relabel = {}
    out = []
    for b in blocks:
        if b == -1:
            out.append(-1)
        else:
            if b not in relabel:
                relabel[b] = len(relabel)
            out.append(relabel[b])
    return tuple(out)


def _run_tw_dp(inst: Instance, ops) -> OptResult:
    W = inst.waypoints
    stack: list[tuple[tuple, dict]] = []  # (bag tuple, table)
    tables = []  # per op: table for backtracking
    for op, arg in ops:
        if op == "leaf":
            bag = ()
            table = {((), (), False): (0, None)}
        elif op == "intro":
            bag0, t0 = stack.pop()
            v = arg
            p = 0
            while p < len(bag0) and bag0[p] < v:
                p += 1
            bag = bag0[:p] + (v,) + bag0[p:]
            table = {}
            for (par, blk, done), (cost, _) in t0.items():
                state = (par[:p] + (0,) + par[p:], blk[:p] + (-1,) + blk[p:], done)
                table[state] = (cost, (par, blk, done))
        elif op == "forget":
            bag0, t0 = stack.pop()
            v = arg
            p = bag0.index(v)
            bag = bag0[:p] + bag0[p + 1:]
            table = {}
            for (par, blk, done), (cost, _) in t0.items():
                if par[p] == 1:
                    continue
                if blk[p] == -1:
                    if v in W:
                        continue
                    ndone = done
                else:
                    rest = blk[:p] + blk[p + 1:]
                    if blk[p] in rest:
                        ndone = done
                    else:
                        if done or any(b != -1 for b in rest):
                            continue
                        ndone = True
                state = (par[:p] + par[p + 1:], _canon(blk[:p] + blk[p + 1:]), ndone)
                old = table.get(state)
                if old is None or cost < old[0]:
                    table[state] = (cost, (par, blk, done))
        elif op == "edge":
            bag0, t0 = stack.pop()
            bag = bag0
            e = inst.edges[arg]
            pu, pv = bag.index(e.u), bag.index(e.v)
            cap = inst.effective_capacity(e)
            table = {}
            for (par, blk, done), (cost, _) in t0.items():
                for mult in range(cap + 1):
                    if mult == 0:
                        state, ncost = (par, blk, done), cost
                    else:
                        if done:
                            continue
                        npar = list(par)
                        if mult % 2:
                            npar[pu] ^= 1
                            npar[pv] ^= 1
                        nblk = list(blk)
                        fresh = max([b for b in nblk if b != -1], default=-1) + 1
                        if nblk[pu] == -1:
                            nblk[pu] = fresh
                            fresh += 1
                        if nblk[pv] == -1:
                            nblk[pv] = fresh
                        a, b = nblk[pu], nblk[pv]
                        if a != b:
                            nblk = [a if x == b else x for x in nblk]
                        state = (tuple(npar), _canon(nblk), done)
                        ncost = cost + mult * e.weight
                    old = table.get(state)
                    if old is None or ncost < old[0]:
                        table[state] = (ncost, ((par, blk, done), mult))
        elif op == "join":
            bag_r, t_r = stack.pop()
            bag_l, t_l = stack.pop()
            assert bag_l == bag_r
            bag = bag_l
            k = len(bag)
            table = {}
            for (par1, blk1, done1), (c1, _) in t_l.items():
                for (par2, blk2, done2), (c2, _) in t_r.items():
                    if done1 and done2:
                        continue
                    if done1 and any(b != -1 for b in blk2):
                        continue
                    if done2 and any(b != -1 for b in blk1):
                        continue
                    npar = tuple(a ^ b for a, b in zip(par1, par2))
                    parent = list(range(k))

                    def find(x):
                        while parent[x] != x:
                            parent[x] = parent[parent[x]]
                            x = parent[x]
                        return x

                    for blk in (blk1, blk2):
                        firsts = {}
                        for i, b in enumerate(blk):
                            if b == -1:
                                continue
                            if b in firsts:
                                parent[find(i)] = find(firsts[b])
                            else:
                                firsts[b] = i
                    used = [blk1[i] != -1 or blk2[i] != -1 for i in range(k)]
                    nblk = tuple(find(i) if used[i] else -1 for i in range(k))
                    state = (npar, _canon(nblk), done1 or done2)
                    ncost = c1 + c2
                    old = table.get(state)
                    if old is None or ncost < old[0]:
                        table[state] = (ncost, ((par1, blk1, done1), (par2, blk2, done2)))
        else:
            raise AssertionError(op)
        stack.append((bag, table))
        tables.append(table)

    assert len(stack) == 1 and stack[0][0] == ()
    final = stack[0][1].get(((), (), True))
    if final is None:
        return OptResult(False, None, None)
    opt = final[0]

    # backtrack the chosen multiplicities
    mult = [0] * len(inst.edges)
    want: list = [None] * len(ops)
    want[-1] = ((), (), True)
    for i in range(len(ops) - 1, -1, -1):
        op, arg = ops[i]
        state = want[i]
        if state is None:
            continue
        back = tables[i][state][1]
        if op == "leaf":
            continue
        if op == "edge":
            child, m = back
            mult[arg] += m
            want[i - 1] = child
        elif op == "join":
            left, right = back
            want[i - 1] = right
            want[_subtree_start(ops, i - 1) - 1] = left
        else:
            want[i - 1] = back
    sol = make_solution(inst, mult)
    assert sol.total_weight == opt
    assert check_certificate(inst, sol) or sol.total_weight > inst.budget
    return OptResult(opt <= inst.budget, int(opt), sol)


def _subtree_start(ops, end: int) -> int:
    """First op index of the postfix subtree ending at `end`.

    Scanning backwards, a join turns two tables into one (need grows) and a
    leaf produces one from nothing (need shrinks); the subtree starts where
    the outstanding need reaches zero.
    """
    need = 1
    j = end
    while True:
        o = ops[j][0]
        if o == "join":
            need += 1
        elif o == "leaf":
            need -= 1
            if need == 0:
                return j
        j -= 1

ENGINES = {
    "multiplicity": solve_exact_multiplicity,
    "heldkarp": solve_heldkarp,
    "treewidth": solve_treewidth,
}


def solve_auto(inst: Instance, caps: OracleCaps = DEFAULT_CAPS) -> OptResult:
    """Solve with the widest applicable engine; ScaleError if none fits."""
    if len(inst.edges) <= caps.multiplicity_edges:
        return solve_exact_multiplicity(inst, caps)
    if inst.kind != KIND_WRP and len(inst.waypoints) <= caps.heldkarp_waypoints:
        return solve_heldkarp(inst, caps)
    return solve_treewidth(inst, caps)


def equivalent(a: Instance, b: Instance, caps: OracleCaps = DEFAULT_CAPS) -> bool:
    """True iff both instances get the same feasibility verdict."""
    return solve_auto(a, caps).feasible == solve_auto(b, caps).feasible
