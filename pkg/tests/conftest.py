import numpy as np
import pytest

from kacward.examples import NAMES, builtin


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=NAMES)
def any_builtin(request):
    return builtin(request.param)


def brute_even_subgraphs(g):
    """All edge subsets with even degree everywhere, by scanning 2**E subsets."""
    out = []
    for mask in range(1 << g.n_edges):
        deg = [0] * g.n_vertices
        for i, e in enumerate(g.edges):
            if mask >> i & 1:
                deg[e.u] += 1
                deg[e.v] += 1
        if all(d % 2 == 0 for d in deg):
            out.append(frozenset(i for i in range(g.n_edges) if mask >> i & 1))
    return out


def spin_partition_function(g, J, beta):
    """Ising partition function by summing over all 2**V spin configurations."""
    J = np.asarray(J, dtype=float)
    u = np.array([e.u for e in g.edges])
    v = np.array([e.v for e in g.edges])
    n = g.n_vertices
    codes = np.arange(1 << n)
    spins = 1 - 2 * ((codes[:, None] >> np.arange(n)) & 1)
    energy = (spins[:, u] * spins[:, v]) @ J
    m = beta * energy
    top = m.max()
    return float(np.log(np.exp(m - top).sum()) + top)
