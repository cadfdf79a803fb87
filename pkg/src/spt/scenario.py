"""Discrete-tick experiment runner.

Scenario grammar::

    END <tick>
    AT <tick> TRAFFIC <src_host> <dst_host> <rate> [DURATION <ticks>]
    AT <tick> LINKDOWN <sw_a> <sw_b>
    AT <tick> LINKUP <sw_a> <sw_b>
    AT <tick> POLICY <path>

Each tick runs in three phases: apply the events due at that tick (in file
order), forward every active flow's packets through the current tables, then
hand at most one packet-in to the monitor if anything missed.  A reconciled
plane therefore carries traffic from the following tick on.
"""
from __future__ import annotations

import csv
import logging
import os
from dataclasses import dataclass, field

from .dataplane import DataPlane, Delivered, Packet
from .errors import NotFoundError, ParseError, SptError
from .monitor import Monitor
from .policy import load_policy
from .topology import apply_link_event

log = logging.getLogger(__name__)

METRICS_CSV_HEADER = ("tick", "src_host", "dst_host", "sent", "delivered", "dropped")


@dataclass(frozen=True)
class Traffic:
    tick: int
    src_host: int
    dst_host: int
    rate: int
    duration: int | None = None
    lineno: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LinkEvent:
    tick: int
    sw_a: int
    sw_b: int
    up: bool
    lineno: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PolicyEvent:
    tick: int
    path: str
    lineno: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Scenario:
    end_tick: int
    events: tuple = ()

    def events_at(self, tick):
        return [e for e in self.events if e.tick == tick]


@dataclass(frozen=True)
class MetricsRecord:
    tick: int
    src_host: int
    dst_host: int
    sent: int
    delivered: int
    dropped: int


def _nat(token, lineno, what, positive=False):
    if not (token.isascii() and token.isdigit()):
        raise ParseError(lineno, f"{what} must be a non-negative integer, got {token!r}")
    value = int(token)
    if positive and value == 0:
        raise ParseError(lineno, f"{what} must be positive")
    return value


def parse_scenario(text):
    end_tick = None
    events = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "END" and len(tokens) == 2:
            if end_tick is not None:
                raise ParseError(lineno, "END given twice")
            end_tick = _nat(tokens[1], lineno, "end tick", positive=True)
            continue
        if tokens[0] != "AT" or len(tokens) < 3:
            raise ParseError(lineno, f"unrecognised line {raw!r}")
        tick = _nat(tokens[1], lineno, "tick")
        kind, args = tokens[2], tokens[3:]
        if kind == "TRAFFIC" and len(args) in (3, 5):
            src, dst = (_nat(a, lineno, "host id", positive=True) for a in args[:2])
            rate = _nat(args[2], lineno, "rate", positive=True)
            duration = None
            if len(args) == 5:
                if args[3] != "DURATION":
                    raise ParseError(lineno, f"expected DURATION, got {args[3]!r}")
                duration = _nat(args[4], lineno, "duration", positive=True)
            events.append(Traffic(tick, src, dst, rate, duration, lineno))
        elif kind in ("LINKDOWN", "LINKUP") and len(args) == 2:
            a, b = (_nat(x, lineno, "switch id", positive=True) for x in args)
            events.append(LinkEvent(tick, a, b, kind == "LINKUP", lineno))
        elif kind == "POLICY" and len(args) == 1:
            events.append(PolicyEvent(tick, args[0], lineno))
        else:
            raise ParseError(lineno, f"malformed {kind} event {raw!r}")
    if end_tick is None:
        raise ParseError(0, "missing END line")
    for e in events:
        if e.tick > end_tick:
            raise ParseError(e.lineno, f"event tick {e.tick} is beyond END {end_tick}")
    return Scenario(end_tick, tuple(events))


def load_scenario(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


class Simulation:
    """Mutable state of one scenario run.

    ``link_capacity`` (packets per tick per directed edge) enables
    proportional dropping on oversubscribed edges; None disables it.
    """

    def __init__(self, scenario, topo, policy, base_dir=".", link_capacity=None):
        self.scenario = scenario
        self.topo = topo
        self.policy = policy
        self.link_capacity = link_capacity
        self.plane = DataPlane.for_topology(topo)
        self.monitor = Monitor()
        self.records = []
        self.reports = []  # (tick, ReconcileReport) for triggered reconciliations
        self.tick = -1
        self._flows = []  # [start, last, src, dst, rate]
        self._policies = {}
        self._check(base_dir)

    def _check(self, base_dir):
        if self.link_capacity is not None and self.link_capacity <= 0:
            raise SptError("link capacity must be positive")
        links = {e.link for e in self.topo.edges}
        for e in self.scenario.events:
            if isinstance(e, Traffic):
                for h in (e.src_host, e.dst_host):
                    if h not in self.topo.host_by_id:
                        raise NotFoundError(f"line {e.lineno}: TRAFFIC names unknown host {h}")
                if e.src_host == e.dst_host:
                    raise SptError(f"line {e.lineno}: TRAFFIC source equals destination")
            elif isinstance(e, LinkEvent):
                if frozenset((e.sw_a, e.sw_b)) not in links:
                    raise NotFoundError(
                        f"line {e.lineno}: no link between switches {e.sw_a} and {e.sw_b}"
                    )
            elif isinstance(e, PolicyEvent):
                path = e.path if os.path.isabs(e.path) else os.path.join(base_dir, e.path)
                self._policies[e] = load_policy(path)

    def _apply(self, event):
        if isinstance(event, LinkEvent):
            self.topo = apply_link_event(self.topo, event.sw_a, event.sw_b, event.up)
        elif isinstance(event, PolicyEvent):
            self.policy = self._policies[event]
        else:
            last = self.scenario.end_tick
            if event.duration is not None:
                last = min(last, event.tick + event.duration - 1)
            self._flows.append([event.tick, last, event.src_host, event.dst_host, event.rate])

    def active_flows(self, tick):
        """Offered rate per (src, dst) at ``tick``, in first-start order."""
        rates = {}
        for start, last, src, dst, rate in self._flows:
            if start <= tick <= last:
                rates[(src, dst)] = rates.get((src, dst), 0) + rate
        return rates

    def step(self):
        self.tick += 1
        tick = self.tick
        for event in self.scenario.events_at(tick):
            self._apply(event)

        rates = self.active_flows(tick)
        outcomes = {}
        for (src, dst), rate in rates.items():
            pkt = Packet(self.topo.host_by_id[src].ip, self.topo.host_by_id[dst].ip)
            outcomes[(src, dst)] = self.plane.forward(self.topo, pkt)
        delivered = self._delivered(rates, outcomes)
        for (src, dst), rate in rates.items():
            got = delivered[(src, dst)]
            self.records.append(MetricsRecord(tick, src, dst, rate, got, rate - got))

        if any(not isinstance(o, Delivered) for o in outcomes.values()):
            report, self.policy = self.monitor.on_packet_in(
                self.policy, self.topo, self.plane, tick
            )
            if report.triggered:
                self.reports.append((tick, report))
        return tick

    def _delivered(self, rates, outcomes):
        got = {
            pair: rates[pair] if isinstance(o, Delivered) else 0
            for pair, o in outcomes.items()
        }
        if self.link_capacity is None:
            return got
        load = {}
        for pair, o in outcomes.items():
            if isinstance(o, Delivered):
                for edge in o.edges:
                    key = (edge.src_sw, edge.src_port)
                    load[key] = load.get(key, 0) + rates[pair]
        cap = self.link_capacity
        for pair, o in outcomes.items():
            if isinstance(o, Delivered):
                for edge in o.edges:
                    offered = load[(edge.src_sw, edge.src_port)]
                    if offered > cap:
                        got[pair] = min(got[pair], rates[pair] * cap // offered)
        return got

    def run(self):
        while self.tick < self.scenario.end_tick:
            self.step()
        return self.records


def run_scenario(scenario, topo, initial_policy, base_dir=".", link_capacity=None):
    sim = Simulation(scenario, topo, initial_policy, base_dir, link_capacity)
    return sim.run()


def write_metrics_csv(records, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(METRICS_CSV_HEADER)
    for r in records:
        writer.writerow((r.tick, r.src_host, r.dst_host, r.sent, r.delivered, r.dropped))


def read_metrics_csv(fh):
    return [MetricsRecord(*(int(r[k]) for k in METRICS_CSV_HEADER)) for r in csv.DictReader(fh)]
