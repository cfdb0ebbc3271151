"""Exhaustive high-temperature expansion on a toric graph.

Even subgraphs form the GF(2) cycle space, spanned by the fundamental
cycles of a spanning tree.  Each even subgraph is classified by the parity
of its total displacement, which is its class in H_1(T^2; Z_2).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import TooLarge
from .toric_graph import ToricGraph, as_weights, validate

DEFAULT_CAP = 24
_CHUNK_BITS = 14


def cycle_space_dim(g: ToricGraph) -> int:
    return g.n_edges - g.n_vertices + 1


def cycle_basis(g: ToricGraph) -> np.ndarray:
    """Fundamental cycles of a BFS spanning tree, as a (k, E) 0/1 matrix."""
    adj: list[list[tuple[int, int]]] = [[] for _ in g.vertices]
    for i, e in enumerate(g.edges):
        adj[e.u].append((i, e.v))
        adj[e.v].append((i, e.u))
    parent_edge = [-1] * g.n_vertices
    depth = [-1] * g.n_vertices
    depth[0] = 0
    tree = set()
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for i, b in adj[a]:
            if depth[b] < 0:
                depth[b] = depth[a] + 1
                parent_edge[b] = i
                tree.add(i)
                queue.append(b)

    def path_to_root(v):
        edges = []
        while parent_edge[v] >= 0:
            i = parent_edge[v]
            edges.append(i)
            e = g.edges[i]
            v = e.u if e.v == v else e.v
        return edges

    rows = []
    for i, e in enumerate(g.edges):
        if i in tree:
            continue
        row = np.zeros(g.n_edges, dtype=np.uint8)
        row[i] ^= 1
        for j in path_to_root(e.u) + path_to_root(e.v):
            row[j] ^= 1
        rows.append(row)
    return np.array(rows, dtype=np.uint8).reshape(-1, g.n_edges)


def _check(g: ToricGraph, cap: int) -> int:
    validate(g)
    k = cycle_space_dim(g)
    if k > cap:
        raise TooLarge(f"cycle space dimension {k} exceeds the enumeration cap {cap}")
    return k


def _coefficients(lo: int, hi: int, k: int) -> np.ndarray:
    codes = np.arange(lo, hi, dtype=np.int64)
    return ((codes[:, None] >> np.arange(k)) & 1).astype(np.uint8)


def _chunks(g: ToricGraph, k: int):
    """Yield (membership matrix, class index) blocks covering all 2**k subsets."""
    basis = cycle_basis(g).astype(np.int64)
    parity = g.displacement[0::2] % 2
    total = 1 << k
    step = 1 << min(k, _CHUNK_BITS)
    for lo in range(0, total, step):
        coeffs = _coefficients(lo, lo + step, k).astype(np.int64)
        member = (coeffs @ basis) & 1
        cls = (member @ parity) & 1
        yield member.astype(bool), cls[:, 0] + 2 * cls[:, 1]


def even_subgraphs(g: ToricGraph, cap: int = DEFAULT_CAP) -> Iterator[tuple[frozenset[int], tuple[int, int]]]:
    """All even subgraphs as (edge-index set, homology class) pairs."""
    k = _check(g, cap)
    for member, cls in _chunks(g, k):
        for row, c in zip(member, cls):
            yield frozenset(np.flatnonzero(row).tolist()), (int(c & 1), int(c >> 1))


@dataclass(frozen=True)
class HomologyTable:
    z00: float
    z10: float
    z01: float
    z11: float
    k: int

    @property
    def total(self) -> float:
        return self.z00 + self.z10 + self.z01 + self.z11

    @property
    def trivial(self) -> float:
        """Weight of subgraphs winding an even number of times both ways."""
        return self.z00

    @property
    def nontrivial(self) -> float:
        return self.z10 + self.z01 + self.z11

    def as_dict(self) -> dict[str, float]:
        return {"Z00": self.z00, "Z10": self.z10, "Z01": self.z01, "Z11": self.z11}


def homology_table(g: ToricGraph, x, cap: int = DEFAULT_CAP, log_space: bool = False) -> HomologyTable:
    """Partial partition functions Z_ab summed over each homology class.

    With ``log_space`` the subset weights are formed as exp(sum log x_e),
    which avoids underflow of long products when all weights are positive.
    """
    k = _check(g, cap)
    x = as_weights(g, x)
    sums = np.zeros(4)
    if log_space:
        if (x <= 0).any():
            raise ValueError("log-space accumulation needs positive weights")
        logx = np.log(x)
    for member, cls in _chunks(g, k):
        if log_space:
            w = np.exp(member @ logx)
        else:
            w = np.where(member, x, 1.0).prod(axis=1)
        sums += np.bincount(cls, weights=w, minlength=4)
    return HomologyTable(float(sums[0]), float(sums[1]), float(sums[2]), float(sums[3]), k)


def partition_function(g: ToricGraph, x, cap: int = DEFAULT_CAP) -> float:
    """Z(G, x): total weight of all even subgraphs."""
    return homology_table(g, x, cap=cap).total


def indicator(g: ToricGraph, x, cap: int = DEFAULT_CAP) -> float:
    """Z_E0 - Z_E1, positive in the disordered phase."""
    t = homology_table(g, x, cap=cap)
    return t.trivial - t.nontrivial


def symbolic_table(g: ToricGraph, cap: int = 8) -> dict[str, list[tuple[str, ...]]]:
    """Monomials (edge-name tuples) of each Z_ab; a debugging aid for tiny graphs."""
    if g.n_edges > cap:
        raise TooLarge(f"symbolic output is limited to {cap} edges")
    out: dict[str, list[tuple[str, ...]]] = {"Z00": [], "Z10": [], "Z01": [], "Z11": []}
    for subset, (a, b) in even_subgraphs(g):
        out[f"Z{a}{b}"].append(tuple(g.edges[i].name for i in sorted(subset)))
    return {key: sorted(val, key=lambda m: (len(m), m)) for key, val in out.items()}
