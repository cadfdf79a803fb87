"""Compile host-level access policies into SDN flow entries and keep a
simulated data plane in step with policy edits and link failures."""

from .dataplane import DataPlane, Delivered, Looped, Packet, TableMiss, pingall, verify_reachability
from .errors import NotFoundError, ParseError, SptError, UnboundPrincipalError, ValidationError
from .monitor import Monitor, ReconcileReport
from .pathfinder import bfs_distance, djk_route
from .policy import AccessRule, SecurityPolicy, parse_policy, policy_dirty, serialize_policy
from .topology import (
    DirectedEdge,
    HostBinding,
    Topology,
    adjacency_matrix,
    apply_link_event,
    parse_topology,
    resolve_host,
    serialize_topology,
)
from .transform import Delta, FlowEntry, transform_rule, transform_spm

__version__ = "0.1.0"
