"""Operation-count and wall-time benchmark for whole-policy compilation."""
from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass

from .pathfinder import OpCounter
from .policy import AccessRule, SecurityPolicy
from .topology import random_topology
from .transform import transform_spm


@dataclass(frozen=True)
class BenchRow:
    switches: int
    rules: int
    mean_ops: float
    mean_wall_ms: float


def random_policy(host_ids, m, rng):
    pairs = [(a, b) for a in host_ids for b in host_ids if a != b]
    if m > len(pairs):
        raise ValueError(f"cannot draw {m} distinct rules from {len(host_ids)} hosts")
    return SecurityPolicy(tuple(AccessRule(a, b, 1) for a, b in rng.sample(pairs, m)))


def bench(n, m, trials=10, seed=0):
    if n < 2 or m < 1 or trials < 1:
        raise ValueError("need switches >= 2, rules >= 1, trials >= 1")
    topo = random_topology(n, seed)
    spm = random_policy([h.host_id for h in topo.hosts], m, random.Random(seed + 1))
    ops, walls = [], []
    for _ in range(trials):
        counter = OpCounter()
        t0 = time.perf_counter()
        transform_spm(spm, topo, counter)
        walls.append((time.perf_counter() - t0) * 1000.0)
        ops.append(counter.ops)
    return BenchRow(n, m, statistics.fmean(ops), statistics.fmean(walls))


def bench_sweep(ns, ms, trials=1, seed=0):
    return sorted(
        (bench(n, m, trials, seed) for n in ns for m in ms),
        key=lambda r: (r.switches, r.rules),
    )


def loglog_slope(xs, ys):
    slope, _ = statistics.linear_regression([math.log(x) for x in xs], [math.log(y) for y in ys])
    return slope
