"""Data-plane graph: switches, directed edges with liveness, host attachments.

Topology file format::

    SWITCH <id>
    HOST <host_id> <ip> <switch_id> <port>
    LINK <sw_a> <port_a> <sw_b> <port_b>

Each LINK line is one physical link and expands to two directed edges.
"""
from __future__ import annotations

import ipaddress
import math
import random
from dataclasses import dataclass, replace
from functools import cached_property

from .errors import NotFoundError, ParseError, UnboundPrincipalError, ValidationError

INF = math.inf


@dataclass(frozen=True)
class HostBinding:
    host_id: int
    ip: str
    switch_id: int
    port: int


@dataclass(frozen=True)
class DirectedEdge:
    src_sw: int
    src_port: int
    dst_sw: int
    dst_port: int
    using: bool = True
    cost: int = 1

    def __post_init__(self):
        if self.src_sw == self.dst_sw:
            raise ValidationError(f"edge joins switch {self.src_sw} to itself")
        if self.cost != 1:
            raise ValidationError("edge cost is fixed at 1")

    @property
    def link(self):
        return frozenset((self.src_sw, self.dst_sw))

    def reversed(self):
        return DirectedEdge(self.dst_sw, self.dst_port, self.src_sw, self.src_port, self.using)


@dataclass(frozen=True)
class CostMatrix:
    """Hop-cost matrix indexed by ascending switch id: 0 on the diagonal,
    1 where a live edge exists, inf elsewhere."""

    switch_ids: tuple[int, ...]
    cells: tuple[tuple[float, ...], ...]

    @property
    def n(self):
        return len(self.switch_ids)

    @cached_property
    def index(self):
        return {sw: i for i, sw in enumerate(self.switch_ids)}

    def cost(self, src_sw, dst_sw):
        return self.cells[self.index[src_sw]][self.index[dst_sw]]


@dataclass(frozen=True)
class Topology:
    switch_ids: frozenset[int]
    edges: tuple[DirectedEdge, ...] = ()
    hosts: tuple[HostBinding, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "switch_ids", frozenset(self.switch_ids))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "hosts", tuple(self.hosts))
        self._validate()

    def _validate(self):
        used_ports = {}
        for edge in self.edges:
            for sw in (edge.src_sw, edge.dst_sw):
                if sw not in self.switch_ids:
                    raise ValidationError(f"edge {edge} references unknown switch {sw}")
            key = (edge.src_sw, edge.src_port)
            if key in used_ports:
                raise ValidationError(f"port {edge.src_port} reused on switch {edge.src_sw}")
            used_ports[key] = edge
        for edge in self.edges:
            back = used_ports.get((edge.dst_sw, edge.dst_port))
            if back is None or (back.dst_sw, back.dst_port) != (edge.src_sw, edge.src_port):
                raise ValidationError(f"edge {edge} has no mirrored reverse edge")
        ids, ips = set(), set()
        for host in self.hosts:
            if host.switch_id not in self.switch_ids:
                raise ValidationError(
                    f"host {host.host_id} attached to unknown switch {host.switch_id}"
                )
            if (host.switch_id, host.port) in used_ports:
                raise ValidationError(
                    f"host {host.host_id} uses port {host.port} already taken by a link "
                    f"on switch {host.switch_id}"
                )
            if host.host_id in ids:
                raise ValidationError(f"duplicate host id {host.host_id}")
            if host.ip in ips:
                raise ValidationError(f"duplicate host ip {host.ip}")
            ids.add(host.host_id)
            ips.add(host.ip)
            used_ports[(host.switch_id, host.port)] = host

    # lookups; cached per (immutable) instance

    @cached_property
    def sorted_switches(self):
        return tuple(sorted(self.switch_ids))

    @cached_property
    def edge_at(self):
        """(switch, port) -> outgoing DirectedEdge."""
        return {(e.src_sw, e.src_port): e for e in self.edges}

    @cached_property
    def host_at(self):
        return {(h.switch_id, h.port): h for h in self.hosts}

    @cached_property
    def host_by_id(self):
        return {h.host_id: h for h in self.hosts}

    @cached_property
    def host_by_ip(self):
        return {h.ip: h for h in self.hosts}

    def liveness(self):
        return {(e.src_sw, e.src_port): e.using for e in self.edges}

    def links(self):
        """Physical links as (forward edge, reverse edge), in file order."""
        out, seen = [], set()
        for edge in self.edges:
            key = (edge.src_sw, edge.src_port)
            if key in seen:
                continue
            back = self.edge_at[(edge.dst_sw, edge.dst_port)]
            seen.update({key, (back.src_sw, back.src_port)})
            out.append((edge, back))
        return out

    def require_switch(self, sw):
        if sw not in self.switch_ids:
            raise NotFoundError(f"unknown switch {sw}")


def _ints(tokens, lineno):
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None
    if any(v <= 0 for v in values):
        raise ParseError(lineno, "ids and ports must be positive")
    return values


def parse_topology(text):
    switches, edges, hosts = [], [], []
    seen_switches = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kind, *args = line.split()
        if kind == "SWITCH" and len(args) == 1:
            (sw,) = _ints(args, lineno)
            if sw in seen_switches:
                raise ValidationError(f"line {lineno}: switch {sw} declared twice")
            seen_switches.add(sw)
            switches.append(sw)
        elif kind == "HOST" and len(args) == 4:
            host_id, sw, port = _ints([args[0], args[2], args[3]], lineno)
            try:
                ip = str(ipaddress.IPv4Address(args[1]))
            except ValueError:
                raise ParseError(lineno, f"bad IPv4 address {args[1]!r}") from None
            hosts.append(HostBinding(host_id, ip, sw, port))
        elif kind == "LINK" and len(args) == 4:
            a, pa, b, pb = _ints(args, lineno)
            try:
                edge = DirectedEdge(a, pa, b, pb)
            except ValidationError as exc:
                raise ValidationError(f"line {lineno}: {exc}") from None
            edges += [edge, edge.reversed()]
        else:
            raise ParseError(lineno, f"unrecognised line {raw!r}")
    return Topology(frozenset(switches), tuple(edges), tuple(hosts))


def serialize_topology(topo):
    """Structural dump; liveness flags are runtime state and are not written."""
    lines = [f"SWITCH {sw}" for sw in topo.sorted_switches]
    lines += [f"HOST {h.host_id} {h.ip} {h.switch_id} {h.port}" for h in topo.hosts]
    lines += [
        f"LINK {e.src_sw} {e.src_port} {e.dst_sw} {e.dst_port}" for e, _ in topo.links()
    ]
    return "".join(line + "\n" for line in lines)


def load_topology(path):
    with open(path, encoding="utf-8") as fh:
        return parse_topology(fh.read())


def apply_link_event(topo, sw_a, sw_b, up):
    topo.require_switch(sw_a)
    topo.require_switch(sw_b)
    target = frozenset((sw_a, sw_b))
    if not any(e.link == target for e in topo.edges):
        raise NotFoundError(f"no link between switches {sw_a} and {sw_b}")
    edges = tuple(
        replace(e, using=bool(up)) if e.link == target else e for e in topo.edges
    )
    return replace(topo, edges=edges)


def adjacency_matrix(topo, counter=None):
    ids = topo.sorted_switches
    index = {sw: i for i, sw in enumerate(ids)}
    n = len(ids)
    rows = [[INF] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 0
    for e in topo.edges:
        if e.using:
            rows[index[e.src_sw]][index[e.dst_sw]] = 1
    if counter is not None:
        counter.ops += n * n + len(topo.edges)
    return CostMatrix(ids, tuple(tuple(r) for r in rows))


def resolve_host(topo, principal_id):
    try:
        return topo.host_by_id[principal_id]
    except KeyError:
        raise UnboundPrincipalError(principal_id) from None


def random_topology(n, seed, hosts=None, chords=None):
    """Seeded connected topology: ring backbone plus n // 4 random chords.

    ``hosts`` switches (default: every switch) get one host each on port 1,
    with host id = switch id and ip 10.x.y.z derived from it.
    """
    if n < 2:
        raise ValueError("need at least two switches")
    rng = random.Random(seed)
    switches = list(range(1, n + 1))
    next_port = {sw: 2 for sw in switches}
    linked = set()
    edges = []

    def link(a, b):
        edge = DirectedEdge(a, next_port[a], b, next_port[b])
        next_port[a] += 1
        next_port[b] += 1
        linked.add(frozenset((a, b)))
        edges.extend((edge, edge.reversed()))

    for i in range(n if n > 2 else 1):
        link(switches[i], switches[(i + 1) % n])
    wanted = n // 4 if chords is None else chords
    candidates = [
        (a, b) for a in switches for b in switches if a < b and frozenset((a, b)) not in linked
    ]
    for a, b in rng.sample(candidates, min(wanted, len(candidates))):
        link(a, b)

    if hosts is None:
        host_switches = switches
    else:
        host_switches = sorted(rng.sample(switches, hosts))
    bindings = [HostBinding(sw, host_ip(sw), sw, 1) for sw in host_switches]
    return Topology(frozenset(switches), tuple(edges), tuple(bindings))


def host_ip(host_id):
    return str(ipaddress.IPv4Address("10.0.0.0") + host_id)
