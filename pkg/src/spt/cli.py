"""Command-line entry point: ``spt transform | pingall | run | bench``."""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .bench import bench_sweep
from .dataplane import DataPlane, pingall, verify_reachability
from .errors import SptError
from .monitor import Monitor
from .policy import load_policy
from .scenario import Simulation, load_scenario, write_metrics_csv
from .topology import load_topology
from .transform import transform_spm, write_flows_csv

log = logging.getLogger("spt")


def _fmt_path(switches):
    return "[" + ",".join(map(str, switches)) + "]"


def cmd_transform(args):
    topo = load_topology(args.topology)
    spm = load_policy(args.policy)
    result = transform_spm(spm, topo)
    for rep in result.reports:
        s, o = rep.rule.pair
        if rep.status == "routed":
            print(f"rule {s}->{o} path={_fmt_path(rep.path.switches)} entries={len(rep.entries)}")
        else:
            print(f"rule {s}->{o} {rep.status} {rep.detail}".rstrip())
    print(f"delta entries={len(result.delta)} routed={result.routed} unrouted={result.unrouted}")
    if args.flows_out:
        with open(args.flows_out, "w", encoding="utf-8", newline="") as fh:
            write_flows_csv(result.delta, fh)
    return 0


def cmd_pingall(args):
    topo = load_topology(args.topology)
    spm = load_policy(args.policy)
    plane = DataPlane.for_topology(topo)
    Monitor().on_packet_in(spm, topo, plane, tick=0)
    matrix = pingall(plane, topo)
    print(matrix.render())
    if args.matrix_out:
        with open(args.matrix_out, "w", encoding="utf-8", newline="") as fh:
            matrix.write_csv(fh)
    ok, violations = verify_reachability(matrix, spm)
    for v in violations:
        print(f"violation {v.kind} {v.src_host}->{v.dst_host}")
    print("policy holds" if ok else "policy VIOLATED")
    return 0 if ok else 1


def cmd_run(args):
    topo = load_topology(args.topology)
    spm = load_policy(args.policy)
    scenario = load_scenario(args.scenario)
    sim = Simulation(
        scenario,
        topo,
        spm,
        base_dir=os.path.dirname(os.path.abspath(args.scenario)),
        link_capacity=args.link_capacity,
    )
    records = sim.run()
    with open(args.metrics_out, "w", encoding="utf-8", newline="") as fh:
        write_metrics_csv(records, fh)
    print(f"ticks={scenario.end_tick + 1} records={len(records)} reconciliations={len(sim.reports)}")
    return 0


def cmd_bench(args):
    rows = bench_sweep(args.switches, args.rules, trials=args.trials, seed=args.seed)
    print("switches,rules,mean_ops,mean_wall_ms")
    for r in rows:
        print(f"{r.switches},{r.rules},{r.mean_ops:.1f},{r.mean_wall_ms:.3f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="spt", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="compile a policy into flow entries")
    p.add_argument("--topology", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--flows-out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("pingall", help="load the plane and probe all host pairs")
    p.add_argument("--topology", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--matrix-out")
    p.set_defaults(func=cmd_pingall)

    p = sub.add_parser("run", help="run a tick scenario and write per-tick metrics")
    p.add_argument("--topology", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--metrics-out", required=True)
    p.add_argument("--link-capacity", type=int, metavar="R", help="packets per tick per link")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="operation counts for random topologies")
    p.add_argument("--switches", type=int, nargs="+", required=True, metavar="N")
    p.add_argument("--rules", type=int, nargs="+", required=True, metavar="M")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ValueError as exc:
        parser.error(str(exc))
    except (SptError, OSError) as exc:
        print(f"spt: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
