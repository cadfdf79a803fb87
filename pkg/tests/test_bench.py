import pytest

from spt.bench import bench, bench_sweep, loglog_slope
from spt.pathfinder import OpCounter, djk_route
from spt.topology import random_topology


def test_baseline_row():
    row = bench(11, 4, trials=10, seed=7)
    assert (row.switches, row.rules) == (11, 4)
    assert row.mean_ops > 0 and row.mean_wall_ms > 0


def test_smallest_instance():
    topo = random_topology(2, seed=0)
    assert djk_route(topo, 1, 2) == [1, 2]
    c = OpCounter()
    djk_route(topo, 1, 2, c)
    # 2x2 matrix + 2 edges, then two settle rounds of (scan 2 + relax 2)
    assert c.ops == 4 + 2 + 2 * (2 + 2)
    assert bench(2, 1, trials=1).mean_ops == c.ops


def test_quadratic_ratio():
    small, large = bench(100, 4, trials=1, seed=1), bench(400, 4, trials=1, seed=1)
    assert large.mean_ops / small.mean_ops == pytest.approx(16, rel=0.25)


def test_sweep_sorted_and_slope():
    rows = bench_sweep([100, 50], [2, 1], trials=1)
    assert [(r.switches, r.rules) for r in rows] == [(50, 1), (50, 2), (100, 1), (100, 2)]
    assert loglog_slope([1, 2, 4], [3, 12, 48]) == pytest.approx(2.0)


def test_deterministic_counts():
    assert bench(30, 3, trials=2, seed=5).mean_ops == bench(30, 3, trials=1, seed=5).mean_ops


@pytest.mark.parametrize("n, m", [(1, 1), (5, 0), (2, 3)])
def test_invalid_sizes(n, m):
    with pytest.raises(ValueError):
        bench(n, m, trials=1)
