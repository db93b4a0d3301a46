"""Stop rules, short-circuiting, normalization, and weight compression."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from tspkern.instance import Edge, Instance, InstanceError
from tspkern.oracle import equivalent, solve_exact_multiplicity
from tspkern.preprocess import (
    compress_weights,
    ensure_connected,
    ensure_positive_weights,
    rr_short_circuit,
    rr_stop,
    total_bitsize,
)


def test_rr_stop():
    neg = Instance("stsp", 2, (Edge(0, 1, 1),), frozenset({0, 1}), -1)
    assert rr_stop(neg).verdict == "no"
    one = Instance("stsp", 2, (Edge(0, 1, 1),), frozenset({0}), 0)
    assert rr_stop(one).verdict == "yes"
    two = Instance("stsp", 2, (Edge(0, 1, 1),), frozenset({0, 1}), 5)
    assert rr_stop(two).verdict == "unchanged"


def test_short_circuit_path():
    # u - v - w, weights 2, 3; v is a non-waypoint
    inst = Instance("stsp", 3, (Edge(0, 1, 2), Edge(1, 2, 3)), frozenset({0, 2}), 9)
    out = rr_short_circuit(inst, 1).instance
    assert out.n == 2
    assert out.edges == (Edge(0, 1, 5),)
    assert out.budget == 9 and out.waypoints == frozenset({0, 1})


def test_short_circuit_keeps_cheaper_parallel():
    inst = Instance("stsp", 3,
                    (Edge(0, 1, 2), Edge(1, 2, 3), Edge(0, 2, 4)),
                    frozenset({0, 2}), 9)
    out = rr_short_circuit(inst, 1).instance
    assert out.edges == (Edge(0, 1, 4),)  # existing 4 beats candidate 5

    cheap = Instance("stsp", 3,
                     (Edge(0, 1, 1), Edge(1, 2, 1), Edge(0, 2, 4)),
                     frozenset({0, 2}), 9)
    out2 = rr_short_circuit(cheap, 1).instance
    assert out2.edges == (Edge(0, 1, 2),)  # candidate 2 beats existing 4


def test_short_circuit_isolated():
    inst = Instance("stsp", 3, (Edge(0, 2, 1),), frozenset({0, 2}), 9)
    out = rr_short_circuit(inst, 1).instance
    assert out.n == 2 and out.edges == (Edge(0, 1, 1),)


def test_short_circuit_rejects_waypoint():
    inst = Instance("stsp", 2, (Edge(0, 1, 1),), frozenset({0, 1}), 9)
    with pytest.raises(InstanceError):
        rr_short_circuit(inst, 0)


@given(st.integers(0, 10**6))
@settings(max_examples=120, deadline=None)
def test_short_circuit_safe(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 6)
    m = rng.randint(1, 9)
    edges = []
    for _ in range(m):
        u, v = rng.sample(range(n), 2)
        edges.append(Edge(u, v, rng.randint(0, 9)))
    wps = frozenset(v for v in range(n) if rng.random() < 0.5)
    inst = Instance("stsp", n, tuple(edges), wps, rng.randint(0, 30))
    victims = [v for v in range(n) if v not in wps]
    if not victims:
        return
    out = rr_short_circuit(inst, rng.choice(victims)).instance
    if len(out.edges) <= 14:
        assert equivalent(inst, out)


def test_ensure_connected():
    split = Instance("stsp", 4, (Edge(0, 1, 1), Edge(2, 3, 1)), frozenset({0, 2}), 9)
    assert ensure_connected(split).verdict == "no"
    conn = Instance("stsp", 2, (Edge(0, 1, 1),), frozenset({0, 1}), 9)
    assert ensure_connected(conn).verdict == "unchanged"
    onecomp = Instance("stsp", 4, (Edge(0, 1, 1), Edge(2, 3, 1)), frozenset({0, 1}), 9)
    out = ensure_connected(onecomp).instance
    assert out.n == 2 and out.waypoints == frozenset({0, 1})


def test_positive_weights_single_zero_edge():
    inst = Instance("stsp", 2, (Edge(0, 1, 0),), frozenset({0, 1}), 0)
    out = ensure_positive_weights(inst).instance
    # Q = 0 + 2*2 + 1 = 5
    assert [e.weight for e in out.edges] == [1]
    assert out.budget == 4
    assert equivalent(inst, out)


def test_positive_weights_mixed():
    inst = Instance("stsp", 3, (Edge(0, 1, 0), Edge(1, 2, 3)), frozenset({0, 2}), 3)
    out = ensure_positive_weights(inst).instance
    # Q = 3 + 6 + 1 = 10
    assert [e.weight for e in out.edges] == [1, 30]
    assert out.budget == 36
    assert equivalent(inst, out)


def test_positive_weights_noop():
    inst = Instance("stsp", 2, (Edge(0, 1, 2),), frozenset({0, 1}), 9)
    assert ensure_positive_weights(inst).verdict == "unchanged"


@given(st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_positive_weights_safe(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    edges = []
    for _ in range(rng.randint(1, 8)):
        u, v = rng.sample(range(n), 2)
        edges.append(Edge(u, v, rng.choice([0, 0, 1, 3, 7])))
    inst = Instance("stsp", n, tuple(edges),
                    frozenset(v for v in range(n) if rng.random() < 0.6),
                    rng.randint(-2, 25))
    outcome = ensure_positive_weights(inst)
    if outcome.verdict == "unchanged":
        assert all(e.weight > 0 for e in inst.edges)
        return
    out = outcome.instance
    assert min(e.weight for e in out.edges) >= 1
    assert equivalent(inst, out)


def _sign_profiles_match(a: Instance, b: Instance) -> bool:
    wa = [e.weight for e in a.edges]
    wb = [e.weight for e in b.edges]
    for x in itertools.product((0, 1, 2), repeat=len(wa)):
        sa = sum(w * c for w, c in zip(wa, x)) - a.budget
        sb = sum(w * c for w, c in zip(wb, x)) - b.budget
        if (sa > 0) - (sa < 0) != (sb > 0) - (sb < 0):
            return False
    return True


def test_compress_gcd_example():
    inst = Instance("stsp", 2, (Edge(0, 1, 10**6), Edge(0, 1, 10**6)),
                    frozenset({0, 1}), 2 * 10**6)
    out = compress_weights(inst).instance
    assert [e.weight for e in out.edges] == [1, 1]
    assert out.budget == 2
    assert _sign_profiles_match(inst, out)


def test_compress_already_minimal():
    inst = Instance("stsp", 2, (Edge(0, 1, 1), Edge(0, 1, 2)), frozenset({0, 1}), 3)
    assert compress_weights(inst).verdict == "unchanged"


def test_compress_scale_guard():
    edges = tuple(Edge(i % 3, (i + 1) % 3, 2 * i + 2) for i in range(13))
    inst = Instance("stsp", 3, edges, frozenset({0, 1}), 5)
    assert compress_weights(inst).verdict == "unchanged"


@given(st.integers(0, 10**6))
@settings(max_examples=120, deadline=None)
def test_compress_verified_and_never_larger(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    m = rng.randint(1, 7)
    edges = []
    for _ in range(m):
        u, v = rng.sample(range(n), 2)
        edges.append(Edge(u, v, rng.randint(0, 10**9)))
    inst = Instance("stsp", n, tuple(edges),
                    frozenset(range(n)), rng.randint(0, 2 * 10**9))
    outcome = compress_weights(inst)
    if outcome.verdict == "unchanged":
        return
    out = outcome.instance
    assert _sign_profiles_match(inst, out)
    assert total_bitsize([e.weight for e in out.edges], out.budget) < \
        total_bitsize([e.weight for e in inst.edges], inst.budget)
    if len(out.edges) <= 14:
        assert solve_exact_multiplicity(inst).feasible == \
            solve_exact_multiplicity(out).feasible
