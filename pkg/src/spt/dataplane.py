"""Simulated OpenFlow data plane with exact-match tables and default deny."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .errors import NotFoundError, SptError, ValidationError
from .transform import write_flows_csv


@dataclass(frozen=True)
class Packet:
    ip_src: str
    ip_dst: str

    def __post_init__(self):
        if self.ip_src == self.ip_dst:
            raise ValidationError("packet source and destination are the same")


@dataclass(frozen=True)
class Delivered:
    host_id: int
    hop_count: int
    edges: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class TableMiss:
    switch_id: int
    in_port: int


@dataclass(frozen=True)
class Looped:
    switch_id: int


class FlowTable:
    def __init__(self, switch_id):
        self.switch_id = switch_id
        self._entries = {}

    def __len__(self):
        return len(self._entries)

    @property
    def entries(self):
        return tuple(self._entries.values())

    def add(self, entry):
        if entry.switch_id != self.switch_id:
            raise ValidationError(f"entry for switch {entry.switch_id} put in table {self.switch_id}")
        self._entries[(entry.ip_src, entry.ip_dst, entry.in_port)] = entry

    def lookup(self, ip_src, ip_dst, in_port):
        return self._entries.get((ip_src, ip_dst, in_port))

    def clear(self):
        self._entries.clear()


class DataPlane:
    """One flow table per switch.  Not thread-safe; callers serialise access."""

    def __init__(self, switch_ids):
        self.tables = {sw: FlowTable(sw) for sw in sorted(switch_ids)}

    @classmethod
    def for_topology(cls, topo):
        return cls(topo.switch_ids)

    def install(self, delta):
        entries = list(delta)
        for e in entries:
            if e.switch_id not in self.tables:
                raise NotFoundError(f"flow entry targets unknown switch {e.switch_id}")
        for e in entries:
            self.tables[e.switch_id].add(e)
        return self

    def clear_all(self):
        for table in self.tables.values():
            table.clear()
        return self

    def snapshot(self):
        return {sw: t.entries for sw, t in self.tables.items()}

    def entry_count(self):
        return sum(len(t) for t in self.tables.values())

    def all_entries(self):
        for sw in sorted(self.tables):
            yield from self.tables[sw].entries

    def forward(self, topo, pkt):
        """Walk ``pkt`` from its source host's attachment point.

        A matched out_port onto a dead edge, an unattached port or a foreign
        host loses the frame and is reported as a miss at that switch.
        """
        src = topo.host_by_ip.get(pkt.ip_src)
        if src is None:
            raise SptError(f"no host with source ip {pkt.ip_src}")
        sw, in_port = src.switch_id, src.port
        visited = set()
        path = []
        while True:
            if sw in visited:
                return Looped(sw)
            visited.add(sw)
            entry = self.tables[sw].lookup(pkt.ip_src, pkt.ip_dst, in_port)
            if entry is None:
                return TableMiss(sw, in_port)
            host = topo.host_at.get((sw, entry.out_port))
            if host is not None:
                if host.ip == pkt.ip_dst:
                    return Delivered(host.host_id, len(path), tuple(path))
                return TableMiss(sw, in_port)
            edge = topo.edge_at.get((sw, entry.out_port))
            if edge is None or not edge.using:
                return TableMiss(sw, in_port)
            path.append(edge)
            sw, in_port = edge.dst_sw, edge.dst_port


def install(plane, delta):
    return plane.install(delta)


def clear_all(plane):
    return plane.clear_all()


def forward(plane, topo, pkt):
    return plane.forward(topo, pkt)


class ReachabilityMatrix:
    def __init__(self, hosts, cells):
        self.hosts = tuple(hosts)
        self.cells = dict(cells)  # (src, dst) -> bool, diagonal absent

    def __getitem__(self, pair):
        return self.cells[pair]

    def reachable_pairs(self):
        return {pair for pair, ok in self.cells.items() if ok}

    def __eq__(self, other):
        return (
            isinstance(other, ReachabilityMatrix)
            and self.hosts == other.hosts
            and self.cells == other.cells
        )

    def write_csv(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("src_host", "dst_host", "reachable"))
        for a in self.hosts:
            for b in self.hosts:
                if a != b:
                    writer.writerow((a, b, int(self.cells[(a, b)])))

    def render(self):
        """Mininet-style pingall text."""
        lines = []
        for a in self.hosts:
            marks = [f"h{b}" if self.cells[(a, b)] else "X" for b in self.hosts if b != a]
            lines.append(f"h{a} -> " + " ".join(marks))
        total = len(self.cells)
        received = len(self.reachable_pairs())
        dropped = 100 * (total - received) // total if total else 0
        lines.append(f"*** Results: {dropped}% dropped ({received}/{total} received)")
        return "\n".join(lines)


def pingall(plane, topo, outcomes=None):
    """Probe every ordered host pair once.  ``outcomes``, if given, collects
    the raw ForwardOutcome per pair."""
    hosts = [h.host_id for h in topo.hosts]
    cells = {}
    for a in topo.hosts:
        for b in topo.hosts:
            if a.host_id == b.host_id:
                continue
            result = plane.forward(topo, Packet(a.ip, b.ip))
            if outcomes is not None:
                outcomes[(a.host_id, b.host_id)] = result
            cells[(a.host_id, b.host_id)] = isinstance(result, Delivered)
    return ReachabilityMatrix(hosts, cells)


@dataclass(frozen=True)
class Violation:
    kind: str  # "missing" | "excess"
    src_host: int
    dst_host: int


def verify_reachability(matrix, spm):
    """Exact correspondence: every rule pair reachable, nothing else reachable."""
    hosts = set(matrix.hosts)
    wanted = spm.pairs()
    for s, o in wanted:
        for principal in (s, o):
            if principal not in hosts:
                raise NotFoundError(f"principal {principal} missing from reachability matrix")
    violations = [Violation("missing", s, o) for s, o in (r.pair for r in spm.rules) if not matrix[(s, o)]]
    violations += [
        Violation("excess", a, b)
        for (a, b) in sorted(matrix.reachable_pairs())
        if (a, b) not in wanted
    ]
    return not violations, violations


def write_tables_csv(plane, fh):
    write_flows_csv(plane.all_entries(), fh)
