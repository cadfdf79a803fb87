"""Packet-in driven reconciliation of the data plane against the policy.

On each packet-in the monitor compares the current policy flags and link
liveness with the snapshot taken at the last reconciliation.  On any change
it clears every flow table, recompiles the whole policy and reinstalls it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .policy import SecurityPolicy, policy_dirty
from .transform import transform_spm

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReconcileReport:
    triggered: bool
    reason: str  # "initial" | "policy_dirty" | "link_changed" | "none"
    rules_routed: int = 0
    rules_unrouted: int = 0
    entries_installed: int = 0

    def log_line(self, tick):
        return (
            f"RECONCILE tick={tick} reason={self.reason} routed={self.rules_routed} "
            f"unrouted={self.rules_unrouted} entries={self.entries_installed}"
        )


QUIET = ReconcileReport(False, "none")


@dataclass
class MonitorState:
    last_policy: SecurityPolicy | None = None
    last_liveness: dict | None = None
    reconcile_count: int = 0


class Monitor:
    def __init__(self, state=None):
        self.state = state or MonitorState()

    def change_reason(self, spm, topo):
        if self.state.last_liveness is None:
            return "initial"
        if policy_dirty(spm):
            return "policy_dirty"
        if topo.liveness() != self.state.last_liveness:
            return "link_changed"
        return None

    def on_packet_in(self, spm, topo, plane, tick=None):
        """Handle one packet-in.  Returns (report, policy); the returned policy
        has its fixed flags consumed when a reconciliation ran."""
        reason = self.change_reason(spm, topo)
        if reason is None:
            return QUIET, spm

        result = transform_spm(spm, topo)
        plane.clear_all()
        plane.install(result.delta)
        spm = spm.with_fixed(0)
        self.state.last_policy = spm
        self.state.last_liveness = topo.liveness()
        self.state.reconcile_count += 1

        report = ReconcileReport(True, reason, result.routed, result.unrouted, len(result.delta))
        log.info(report.log_line(tick if tick is not None else self.state.reconcile_count - 1))
        return report, spm


def on_packet_in(state, spm, topo, plane, tick=None):
    monitor = Monitor(state)
    report, spm = monitor.on_packet_in(spm, topo, plane, tick)
    return report, monitor.state, spm
