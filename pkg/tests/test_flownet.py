"""Flow primitives: max-flow/min-cut, lower bounds, matching."""

import itertools
import random

import pytest

from votemanip.flownet import (
    FlowNetwork,
    feasible_flow_with_demands,
    max_flow,
    perfect_matching,
)


def test_single_arc():
    net = FlowNetwork(2, 0, 1)
    net.add_arc(0, 1, 5)
    r = max_flow(net)
    assert r.value == 5 and r.arc_flows == (5,)


def test_bottleneck():
    net = FlowNetwork(3, 0, 2)
    net.add_arc(0, 1, 3)
    net.add_arc(1, 2, 2)
    assert max_flow(net).value == 2


def test_diamond():
    net = FlowNetwork(4, 0, 3)
    net.add_arc(0, 1, 1)
    net.add_arc(0, 2, 1)
    net.add_arc(1, 3, 1)
    net.add_arc(2, 3, 1)
    assert max_flow(net).value == 2


def test_disconnected_network():
    net = FlowNetwork(3, 0, 2)
    net.add_arc(0, 1, 4)
    assert max_flow(net).value == 0


def test_max_flow_rejects_lower_bounds():
    net = FlowNetwork(2, 0, 1)
    net.add_arc(0, 1, 5, lower=1)
    with pytest.raises(ValueError):
        max_flow(net)


def test_demand_examples():
    net = FlowNetwork(2, 0, 1)
    net.add_arc(0, 1, 3, lower=2)
    assert feasible_flow_with_demands(net, 2).feasible
    assert not feasible_flow_with_demands(net, 1).feasible

    net2 = FlowNetwork(2, 0, 1)
    net2.add_arc(0, 1, 1, lower=1)
    net2.add_arc(0, 1, 1, lower=1)
    r = feasible_flow_with_demands(net2, 2)
    assert r.feasible and r.arc_flows == (1, 1)


def test_demand_zero_value():
    net = FlowNetwork(3, 0, 2)
    net.add_arc(0, 1, 2)
    net.add_arc(1, 2, 2)
    r = feasible_flow_with_demands(net, 0)
    assert r.feasible and r.arc_flows == (0, 0)
    # a mandatory arc out of the source forbids value 0
    net.add_arc(0, 1, 2, lower=1)
    assert not feasible_flow_with_demands(net, 0).feasible


def _check_flow(net, result):
    """Conservation and capacity bounds of a returned witness."""
    balance = [0] * net.nodes
    for (u, v, lower, cap), f in zip(net.arcs, result.arc_flows):
        assert lower <= f <= cap
        balance[u] -= f
        balance[v] += f
    for node in range(net.nodes):
        if node == net.source:
            assert balance[node] == -result.value
        elif node == net.sink:
            assert balance[node] == result.value
        else:
            assert balance[node] == 0


def _random_network(rng, nodes, arcs, max_cap, lowers=False):
    net = FlowNetwork(nodes, 0, nodes - 1)
    for _ in range(arcs):
        u = rng.randrange(nodes)
        v = rng.randrange(nodes)
        if u == v:
            continue
        cap = rng.randint(0, max_cap)
        lower = rng.randint(0, cap) if lowers and rng.random() < 0.4 else 0
        net.add_arc(u, v, cap, lower)
    return net


def _min_cut_value(net):
    """Exhaustive min cut: source side S ranges over all node subsets."""
    best = None
    others = [v for v in range(net.nodes) if v not in (net.source, net.sink)]
    for bits in itertools.product((0, 1), repeat=len(others)):
        side = {net.source} | {v for v, b in zip(others, bits) if b}
        cut = sum(cap for u, v, _, cap in net.arcs if u in side and v not in side)
        best = cut if best is None else min(best, cut)
    return best


def test_max_flow_equals_min_cut_random():
    rng = random.Random(24121838)
    for _ in range(40):
        nodes = rng.randint(3, 9)
        net = _random_network(rng, nodes, rng.randint(2, 14), 6)
        r = max_flow(net)
        _check_flow(net, r)
        assert r.value == _min_cut_value(net)


def _brute_force_flow_exists(net, required):
    """Try every integral assignment on networks with few arcs."""
    ranges = [range(lower, cap + 1) for _, _, lower, cap in net.arcs]
    for assignment in itertools.product(*ranges):
        balance = [0] * net.nodes
        for (u, v, _, _), f in zip(net.arcs, assignment):
            balance[u] -= f
            balance[v] += f
        if balance[net.source] != -required or balance[net.sink] != required:
            continue
        if all(
            balance[x] == 0
            for x in range(net.nodes)
            if x not in (net.source, net.sink)
        ):
            return True
    return False


def test_demand_feasibility_matches_brute_force():
    rng = random.Random(405060)
    for _ in range(60):
        nodes = rng.randint(2, 4)
        net = _random_network(rng, nodes, rng.randint(1, 5), 3, lowers=True)
        for required in range(0, 5):
            got = feasible_flow_with_demands(net, required)
            assert got.feasible == _brute_force_flow_exists(net, required)
            if got.feasible:
                _check_flow(net, got)


def test_matching_k22():
    m = perfect_matching(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert m is not None and len(m) == 2
    assert len({a for a, _ in m}) == 2 and len({b for _, b in m}) == 2


def test_matching_hall_violation():
    assert perfect_matching(2, 1, [(0, 0), (1, 0)]) is None


def test_matching_identity():
    m = perfect_matching(3, 3, [(i, i) for i in range(3)])
    assert sorted(m) == [(0, 0), (1, 1), (2, 2)]


def test_matching_against_brute_force():
    rng = random.Random(7781)
    for _ in range(50):
        left = rng.randint(1, 5)
        right = rng.randint(1, 5)
        edges = sorted(
            {
                (rng.randrange(left), rng.randrange(right))
                for _ in range(rng.randint(0, left * right))
            }
        )
        got = perfect_matching(left, right, edges)
        # brute force over injections
        exists = False
        if left <= right:
            eset = set(edges)
            for image in itertools.permutations(range(right), left):
                if all((i, image[i]) in eset for i in range(left)):
                    exists = True
                    break
        assert (got is not None) == exists
        if got is not None:
            assert len(got) == left
            assert len({a for a, _ in got}) == left
            assert len({b for _, b in got}) == left
            assert set(got) <= set(edges)
