import random

from spt.bench import random_policy
from spt.topology import random_topology


def random_cases(count=100, seed=2024, n_range=(5, 50), m_range=(1, 10)):
    """Seeded (topology, policy) pairs shared by the property and acceptance suites."""
    rng = random.Random(seed)
    cases = []
    for _ in range(count):
        n = rng.randint(*n_range)
        topo = random_topology(n, seed=rng.randrange(2**32), hosts=rng.randint(4, n))
        m = rng.randint(*m_range)
        spm = random_policy([h.host_id for h in topo.hosts], m, rng)
        cases.append((topo, spm))
    return cases
