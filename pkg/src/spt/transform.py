"""Compile policy rules into per-switch exact-match flow entries.

A rule (s, o) resolves to hosts h(s), h(o); a shortest live switch path
between their switches becomes a connected path; each switch on that path
gets one entry (ip_src, ip_dst, in_port => out_port) where the ports chain
through the traversed edges.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .errors import UnboundPrincipalError
from .pathfinder import djk_route
from .topology import HostBinding, resolve_host

FLOW_CSV_HEADER = ("switch_id", "ip_src", "ip_dst", "in_port", "out_port")


@dataclass(frozen=True)
class ConnectedPath:
    src_host: HostBinding
    hops: tuple
    dst_host: HostBinding

    @property
    def switches(self):
        if not self.hops:
            return [self.src_host.switch_id]
        return [self.hops[0].src_sw] + [e.dst_sw for e in self.hops]


@dataclass(frozen=True)
class FlowEntry:
    switch_id: int
    ip_src: str
    ip_dst: str
    in_port: int
    out_port: int

    @property
    def key(self):
        return self.switch_id, self.ip_src, self.ip_dst, self.in_port


@dataclass(frozen=True)
class Delta:
    entries: tuple[FlowEntry, ...] = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def switches(self):
        return {e.switch_id for e in self.entries}


@dataclass(frozen=True)
class RuleReport:
    rule: object
    status: str  # "routed" | "no_path" | "unbound"
    path: ConnectedPath | None = None
    entries: tuple[FlowEntry, ...] = ()
    detail: str = ""


@dataclass
class TransformResult:
    delta: Delta
    reports: list[RuleReport] = field(default_factory=list)

    @property
    def routed(self):
        return sum(r.status == "routed" for r in self.reports)

    @property
    def unrouted(self):
        return len(self.reports) - self.routed


def authorize_path(rule, topo, counter=None):
    src = resolve_host(topo, rule.subject_id)
    dst = resolve_host(topo, rule.object_id)
    switches = djk_route(topo, src.switch_id, dst.switch_id, counter)
    if switches is None:
        return None
    hops = []
    for a, b in zip(switches, switches[1:]):
        # lowest-port live edge when parallel links exist
        hops.append(min(
            (e for e in topo.edges if e.using and e.src_sw == a and e.dst_sw == b),
            key=lambda e: e.src_port,
        ))
    return ConnectedPath(src, tuple(hops), dst)


def path_to_flow_entries(path):
    ip_src, ip_dst = path.src_host.ip, path.dst_host.ip
    in_ports = [path.src_host.port] + [e.dst_port for e in path.hops]
    out_ports = [e.src_port for e in path.hops] + [path.dst_host.port]
    return [
        FlowEntry(sw, ip_src, ip_dst, pin, pout)
        for sw, pin, pout in zip(path.switches, in_ports, out_ports)
    ]


def transform_rule(rule, topo, counter=None):
    path = authorize_path(rule, topo, counter)
    if path is None:
        return None
    return path_to_flow_entries(path)


def transform_spm(spm, topo, counter=None):
    entries, reports = [], []
    for rule in spm.rules:
        try:
            path = authorize_path(rule, topo, counter)
        except UnboundPrincipalError as exc:
            reports.append(RuleReport(rule, "unbound", detail=str(exc)))
            continue
        if path is None:
            reports.append(RuleReport(rule, "no_path"))
            continue
        flows = tuple(path_to_flow_entries(path))
        entries.extend(flows)
        reports.append(RuleReport(rule, "routed", path, flows))
    return TransformResult(Delta(tuple(entries)), reports)


def write_flows_csv(entries, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(FLOW_CSV_HEADER)
    for e in entries:
        writer.writerow((e.switch_id, e.ip_src, e.ip_dst, e.in_port, e.out_port))


def flows_to_csv(entries):
    buf = io.StringIO()
    write_flows_csv(entries, buf)
    return buf.getvalue()


def read_flows_csv(fh):
    rows = csv.DictReader(fh)
    return [
        FlowEntry(int(r["switch_id"]), r["ip_src"], r["ip_dst"], int(r["in_port"]), int(r["out_port"]))
        for r in rows
    ]
