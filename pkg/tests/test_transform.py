import io

import pytest

from spt.errors import UnboundPrincipalError
from spt.policy import AccessRule, SecurityPolicy, parse_policy
from spt.topology import apply_link_event, parse_topology
from spt.transform import (
    ConnectedPath,
    FlowEntry,
    authorize_path,
    flows_to_csv,
    path_to_flow_entries,
    read_flows_csv,
    transform_rule,
    transform_spm,
)

from .cases import random_cases

IP1, IP5 = "10.0.0.1", "10.0.0.5"

# hand-applied to the ref11 port numbering
P1_ENTRIES = [
    FlowEntry(1, IP1, IP5, 1, 2),
    FlowEntry(5, IP1, IP5, 2, 3),
    FlowEntry(8, IP1, IP5, 2, 3),
    FlowEntry(10, IP1, IP5, 2, 1),
]


def cut_everything(topo):
    for fwd, _ in topo.links():
        topo = apply_link_event(topo, fwd.src_sw, fwd.dst_sw, False)
    return topo


def test_authorize_path(ref11):
    p1 = authorize_path(AccessRule(1, 5, 1), ref11)
    assert p1.switches == [1, 5, 8, 10]
    assert (p1.src_host.host_id, p1.dst_host.host_id) == (1, 5)
    assert len(p1.hops) == 3
    assert authorize_path(AccessRule(4, 2, 1), ref11).switches == [9, 6, 2]
    assert authorize_path(AccessRule(1, 5, 1), cut_everything(ref11)) is None


def test_p1_entries(ref11):
    assert path_to_flow_entries(authorize_path(AccessRule(1, 5, 1), ref11)) == P1_ENTRIES


def test_p3_entries(ref11):
    entries = path_to_flow_entries(authorize_path(AccessRule(2, 4, 1), ref11))
    assert [e.switch_id for e in entries] == [2, 6, 9]


def test_degenerate_same_switch_path():
    topo = parse_topology("SWITCH 3\nHOST 1 10.0.0.1 3 1\nHOST 2 10.0.0.2 3 2\n")
    path = authorize_path(AccessRule(1, 2), topo)
    assert path.hops == ()
    assert path_to_flow_entries(path) == [FlowEntry(3, "10.0.0.1", "10.0.0.2", 1, 2)]


def test_transform_rule(ref11):
    assert transform_rule(AccessRule(1, 5, 1), ref11) == P1_ENTRIES
    assert [e.switch_id for e in transform_rule(AccessRule(2, 4, 1), ref11)] == [2, 6, 9]
    with pytest.raises(UnboundPrincipalError):
        transform_rule(AccessRule(1, 99, 1), ref11)


def test_transform_spm_ref_policy(ref11, ref_policy):
    result = transform_spm(ref_policy, ref11)
    assert len(result.delta) == 4 + 4 + 3 + 3
    assert [r.status for r in result.reports] == ["routed"] * 4
    assert [r.path.switches for r in result.reports] == [
        [1, 5, 8, 10], [10, 8, 5, 1], [2, 6, 9], [9, 6, 2]
    ]
    assert list(result.delta.entries[:4]) == P1_ENTRIES


def test_transform_spm_empty(ref11):
    result = transform_spm(SecurityPolicy(), ref11)
    assert len(result.delta) == 0 and result.reports == []


def test_transform_spm_disconnected(ref11, ref_policy):
    result = transform_spm(ref_policy, cut_everything(ref11))
    assert len(result.delta) == 0
    assert [r.status for r in result.reports] == ["no_path"] * 4


def test_unbound_rule_does_not_abort_batch(ref11):
    spm = parse_policy("R 1 99 1\nR 1 5 1\n")
    result = transform_spm(spm, ref11)
    assert [r.status for r in result.reports] == ["unbound", "routed"]
    assert list(result.delta) == P1_ENTRIES


def test_flow_csv_round_trip(ref11, ref_policy):
    delta = transform_spm(ref_policy, ref11).delta
    text = flows_to_csv(delta)
    assert text.splitlines()[0] == "switch_id,ip_src,ip_dst,in_port,out_port"
    assert text.splitlines()[1] == "1,10.0.0.1,10.0.0.5,1,2"
    assert read_flows_csv(io.StringIO(text)) == list(delta)


def check_chaining(path, entries):
    assert len(entries) == len(path.switches)
    assert entries[0].in_port == path.src_host.port
    assert entries[-1].out_port == path.dst_host.port
    for k, edge in enumerate(path.hops):
        assert entries[k].switch_id == edge.src_sw and entries[k].out_port == edge.src_port
        assert entries[k + 1].switch_id == edge.dst_sw and entries[k + 1].in_port == edge.dst_port
    assert {(e.ip_src, e.ip_dst) for e in entries} == {(path.src_host.ip, path.dst_host.ip)}


def test_chaining_and_count_laws_on_random_topologies():
    for topo, spm in random_cases(count=40, seed=9):
        result = transform_spm(spm, topo)
        total = 0
        for rep in result.reports:
            assert rep.status == "routed"
            check_chaining(rep.path, list(rep.entries))
            total += len(rep.path.switches)
        assert len(result.delta) == total
        keys = [e.key for e in result.delta]
        assert len(keys) == len(set(keys))
