"""Hop-count shortest paths over live edges.

``djk_route`` is the array-based Dijkstra the controller uses; it builds the
full cost matrix for every query, so a single route costs O(N^2).
``bfs_distance`` is an independent breadth-first oracle used by the tests.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .topology import INF, adjacency_matrix


@dataclass
class OpCounter:
    """Elementary-operation tally: matrix cells built, min-scan steps, relax checks."""

    ops: int = 0


def djk_route(topo, src_sw, dst_sw, counter=None):
    """Shortest switch path from ``src_sw`` to ``dst_sw``, or None if unreachable.

    Vertices are settled in ascending (distance, switch id) order and a
    predecessor is only replaced on a strictly shorter distance, which makes
    the choice among equal-hop paths deterministic.
    """
    topo.require_switch(src_sw)
    topo.require_switch(dst_sw)
    djk = adjacency_matrix(topo, counter)
    n = djk.n
    src, dst = djk.index[src_sw], djk.index[dst_sw]

    dist = [INF] * n
    prev = [-1] * n
    done = [False] * n
    dist[src] = 0
    ops = 0
    for _ in range(n):
        u = -1
        best = INF
        for i, d in enumerate(dist):
            if d < best and not done[i]:
                best, u = d, i
        ops += n
        if u < 0:
            break
        done[u] = True
        for v, c in enumerate(djk.cells[u]):
            if best + c < dist[v]:
                dist[v] = best + c
                prev[v] = u
        ops += n
    if counter is not None:
        counter.ops += ops

    if dist[dst] == INF:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return [djk.switch_ids[i] for i in reversed(path)]


def bfs_distance(topo, src_sw, dst_sw):
    """Breadth-first hop count over live edges; None when unreachable."""
    topo.require_switch(src_sw)
    topo.require_switch(dst_sw)
    neighbours = {}
    for e in topo.edges:
        if e.using:
            neighbours.setdefault(e.src_sw, set()).add(e.dst_sw)
    seen = {src_sw: 0}
    queue = deque([src_sw])
    while queue:
        sw = queue.popleft()
        if sw == dst_sw:
            return seen[sw]
        for nxt in neighbours.get(sw, ()):
            if nxt not in seen:
                seen[nxt] = seen[sw] + 1
                queue.append(nxt)
    return None
