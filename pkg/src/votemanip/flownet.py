"""Integral max-flow, feasible flow with lower bounds, bipartite matching.

Edmonds-Karp with breadth-first (shortest) augmentation; adjacency is
scanned in arc insertion order, so results are deterministic.  Capacities in
this package are small (O(n*m) of the election), so the O(V*E^2) bound is
irrelevant, but determinism is load-bearing: solver witnesses must be
reproducible.

Lower bounds are reduced to plain max-flow by the standard circulation
transformation: a super-source/super-sink pair absorbs each arc's mandatory
flow and a sink-to-source return arc pins the s-t value.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional


class FlowNetwork:
    """Directed network with per-arc lower bounds and capacities."""

    __slots__ = ("nodes", "source", "sink", "arcs")

    def __init__(self, nodes: int, source: int, sink: int):
        if not (0 <= source < nodes and 0 <= sink < nodes and source != sink):
            raise ValueError("source and sink must be distinct nodes in range")
        self.nodes = nodes
        self.source = source
        self.sink = sink
        self.arcs = []  # (u, v, lower, capacity)

    def add_arc(self, u: int, v: int, capacity: int, lower: int = 0) -> int:
        if not (0 <= u < self.nodes and 0 <= v < self.nodes):
            raise ValueError("arc endpoint out of range")
        if not 0 <= lower <= capacity:
            raise ValueError("need 0 <= lower <= capacity")
        self.arcs.append((u, v, lower, capacity))
        return len(self.arcs) - 1


@dataclass(frozen=True)
class FlowResult:
    value: int
    arc_flows: tuple
    feasible: bool


class _Residual:
    """Paired-edge residual graph for Edmonds-Karp."""

    def __init__(self, nodes: int):
        self.adj = [[] for _ in range(nodes)]  # edge indices
        self.to = []
        self.cap = []

    def add(self, u: int, v: int, cap: int) -> int:
        i = len(self.to)
        self.to.extend((v, u))
        self.cap.extend((cap, 0))
        self.adj[u].append(i)
        self.adj[v].append(i + 1)
        return i

    def bfs_augment(self, s: int, t: int) -> int:
        parent_edge = [-1] * len(self.adj)
        parent_edge[s] = -2
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if u == t:
                break
            for i in self.adj[u]:
                v = self.to[i]
                if self.cap[i] > 0 and parent_edge[v] == -1:
                    parent_edge[v] = i
                    queue.append(v)
        if parent_edge[t] == -1:
            return 0
        # bottleneck along the recorded path
        push = None
        v = t
        while v != s:
            i = parent_edge[v]
            push = self.cap[i] if push is None else min(push, self.cap[i])
            v = self.to[i ^ 1]
        v = t
        while v != s:
            i = parent_edge[v]
            self.cap[i] -= push
            self.cap[i ^ 1] += push
            v = self.to[i ^ 1]
        return push

    def run(self, s: int, t: int) -> int:
        total = 0
        while True:
            pushed = self.bfs_augment(s, t)
            if pushed == 0:
                return total
            total += pushed


def max_flow(net: FlowNetwork) -> FlowResult:
    """Maximum integral s-t flow; all lower bounds must be zero."""
    if any(lower != 0 for _, _, lower, _ in net.arcs):
        raise ValueError("max_flow requires zero lower bounds")
    res = _Residual(net.nodes)
    ids = [res.add(u, v, cap) for u, v, _, cap in net.arcs]
    value = res.run(net.source, net.sink)
    flows = tuple(net.arcs[j][3] - res.cap[i] for j, i in enumerate(ids))
    return FlowResult(value, flows, True)


def feasible_flow_with_demands(net: FlowNetwork, required_value: int) -> FlowResult:
    """Is there an s-t flow of value exactly required_value meeting all
    lower bounds?  Returns the witness flow when one exists."""
    if required_value < 0:
        raise ValueError("required_value must be nonnegative")
    n = net.nodes
    S, T = n, n + 1
    res = _Residual(n + 2)
    ids = []
    demand_total = 0
    for u, v, lower, cap in net.arcs:
        ids.append(res.add(u, v, cap - lower))
        if lower > 0:
            res.add(S, v, lower)
            res.add(u, T, lower)
            demand_total += lower
    # return arc pins the s-t value: lower = capacity = required_value
    if required_value > 0:
        res.add(S, net.source, required_value)
        res.add(net.sink, T, required_value)
        demand_total += required_value
    achieved = res.run(S, T)
    if achieved != demand_total:
        return FlowResult(0, tuple(0 for _ in net.arcs), False)
    # helper flow plus the lower bound collapses to cap - residual
    flows = tuple(net.arcs[j][3] - res.cap[i] for j, i in enumerate(ids))
    return FlowResult(required_value, flows, True)


def perfect_matching(left: int, right: int, edges) -> Optional[list]:
    """A matching covering every left node, as (left, right) pairs, or None.

    Unit-capacity flow; deterministic in edge order.
    """
    # nodes: 0 = source, 1..left = left side, left+1..left+right = right, last = sink
    s = 0
    t = left + right + 1
    net = FlowNetwork(left + right + 2, s, t)
    for i in range(left):
        net.add_arc(s, 1 + i, 1)
    edge_ids = []
    for a, b in edges:
        if not (0 <= a < left and 0 <= b < right):
            raise ValueError("edge endpoint out of range")
        edge_ids.append((net.add_arc(1 + a, 1 + left + b, 1), a, b))
    for j in range(right):
        net.add_arc(1 + left + j, t, 1)
    result = max_flow(net)
    if result.value != left:
        return None
    return [(a, b) for i, a, b in edge_ids if result.arc_flows[i] == 1]
