"""The bipartite Fan-Wu graph C_G and its Kasteleyn determinants.

Every oriented edge ``e`` of G owns one white vertex ``W(e)`` (just left of
``e`` near its origin) and one black vertex ``B(e)`` (just right of ``e``
near its origin).  White vertex ``W(e)`` has exactly three neighbours:

* ``B(e)``     across ``e``   -- transverse edge, weight cos(theta_e)
* ``B(rev e)`` along ``e``    -- parallel edge, weight sin(theta_e), phase phi(e)
* ``B(R(e))``  in the corner between ``e`` and ``R(e)`` -- weight 1

with ``x_e = tan(theta_e / 2)``.  C_G edges are indexed ``e`` (transverse),
``2E + e`` (parallel) and ``4E + e`` (corner) for oriented edges ``e``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NoOrientation, TooLarge
from .kac_ward import HALF_PERIODS, KacWardOperator, half_period_roots
from .homology import DEFAULT_CAP
from .toric_graph import Edge, ToricGraph, Vertex, as_weights, dual, validate

TRANSVERSE, PARALLEL, CORNER = 0, 1, 2

# generic unit-torus points used to fix the orientation class and constant
_REFERENCE_PHASES = ((0.9, 2.3), (-1.7, 0.4), (2.6, -2.1))


@dataclass(frozen=True, eq=False)
class FanWuGraph:
    graph: ToricGraph
    x: np.ndarray
    white: np.ndarray
    black: np.ndarray
    kind: np.ndarray
    parent: np.ndarray
    weight: np.ndarray
    faces: tuple[tuple[int, ...], ...]
    face_kind: tuple[str, ...]

    @property
    def n_white(self) -> int:
        return self.graph.n_oriented

    @property
    def n_black(self) -> int:
        return self.graph.n_oriented

    @property
    def n_vertices(self) -> int:
        return self.n_white + self.n_black

    @property
    def n_edges(self) -> int:
        return len(self.kind)

    @cached_property
    def displacement(self) -> np.ndarray:
        """Lattice displacement carried by each C_G edge (non-zero only on parallels)."""
        d = np.zeros((self.n_edges, 2), dtype=int)
        par = self.kind == PARALLEL
        d[par] = self.graph.displacement[self.parent[par]]
        return d

    def phases(self, z: complex, w: complex) -> np.ndarray:
        d = self.displacement
        return np.power(complex(z), d[:, 0]) * np.power(complex(w), d[:, 1])

    def degrees(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.bincount(self.white, minlength=self.n_white),
            np.bincount(self.black, minlength=self.n_black),
        )

    def embedded(self, inset: float = 0.25) -> ToricGraph:
        """Straight-line embedding of C_G in the same torus, for face tracing."""
        g = self.graph
        lengths = np.hypot(*g.direction.T)
        r = inset * lengths.min()
        ang = np.arctan2(g.direction[:, 1], g.direction[:, 0])
        beta = g.turning_angles
        before = beta[g.rotation_inv]
        verts = []
        for e in range(g.n_oriented):
            p = g.positions[g.origin[e]]
            a = ang[e] + beta[e] / 4
            verts.append(Vertex(f"W{e}", (p[0] + r * math.cos(a), p[1] + r * math.sin(a))))
        for e in range(g.n_oriented):
            p = g.positions[g.origin[e]]
            a = ang[e] - before[e] / 4
            verts.append(Vertex(f"B{e}", (p[0] + r * math.cos(a), p[1] + r * math.sin(a))))
        nw = self.n_white
        edges = [
            Edge(f"c{i}", int(self.white[i]), nw + int(self.black[i]), tuple(int(v) for v in self.displacement[i]), weight=float(self.weight[i]))
            for i in range(self.n_edges)
        ]
        return ToricGraph(g.basis.copy(), verts, edges)


def build_fan_wu(g: ToricGraph, x) -> FanWuGraph:
    validate(g)
    x = as_weights(g, x)
    if ((x <= 0) | (x >= 1)).any():
        raise ValueError("Fan-Wu weights need x in (0, 1)")
    theta = 2 * np.arctan(x)
    n = g.n_oriented
    oe = np.arange(n)
    th = theta[oe >> 1]
    white = np.concatenate([oe, oe, oe])
    black = np.concatenate([oe, oe ^ 1, g.rotation])
    kind = np.repeat([TRANSVERSE, PARALLEL, CORNER], n)
    parent = np.concatenate([oe, oe, oe])
    weight = np.concatenate([np.cos(th), np.sin(th), np.ones(n)])

    faces = []
    kinds = []
    for i in range(g.n_edges):
        e, eb = 2 * i, 2 * i + 1
        faces.append((e, n + eb, eb, n + e))
        kinds.append("rectangle")
    for group in g.out_edges:
        faces.append(tuple(c for e in group for c in (e, 2 * n + e)))
        kinds.append("vertex")
    for cycle in g.faces:
        L = len(cycle)
        faces.append(tuple(c for j in range(L) for c in (n + cycle[j], 2 * n + cycle[(j + 1) % L])))
        kinds.append("face")
    return FanWuGraph(g, x, white, black, kind, parent, weight, tuple(faces), tuple(kinds))


# ----------------------------------------------------------------------
# Kasteleyn orientation


def _solve_gf2(rows: list[int], rhs: list[int], n: int) -> int:
    """Solve a GF(2) system given as bitmask rows; free unknowns are set to 0."""
    pivots: dict[int, tuple[int, int]] = {}
    for row, b in zip(rows, rhs):
        for col, (prow, pb) in pivots.items():
            if row >> col & 1:
                row ^= prow
                b ^= pb
        if row == 0:
            if b:
                raise NoOrientation("face conditions are inconsistent")
            continue
        col = row.bit_length() - 1
        for c, (prow, pb) in list(pivots.items()):
            if prow >> col & 1:
                pivots[c] = (prow ^ row, pb ^ b)
        pivots[col] = (row, b)
    solution = 0
    for col, (_, b) in pivots.items():
        if b:
            solution |= 1 << col
    return solution


def face_signs_target(c: FanWuGraph) -> list[int]:
    """Required parity of minus signs per face: |df|/2 + 1 mod 2."""
    return [(len(f) // 2 + 1) & 1 for f in c.faces]


def face_products(c: FanWuGraph, signs: np.ndarray) -> np.ndarray:
    return np.array([int(np.prod(signs[list(f)])) for f in c.faces])


@dataclass(frozen=True, eq=False)
class KasteleynOrientation:
    signs: np.ndarray
    twist: tuple[int, int] = (0, 0)
    constant: complex = 1.0

    def with_sign(self, edge: int, sign: int) -> "KasteleynOrientation":
        signs = self.signs.copy()
        signs[edge] = sign
        return KasteleynOrientation(signs, self.twist, self.constant)


def _raw_orientation(c: FanWuGraph) -> np.ndarray:
    rows = [sum(1 << i for i in f) for f in c.faces]
    sol = _solve_gf2(rows, face_signs_target(c), c.n_edges)
    bits = np.array([(sol >> i) & 1 for i in range(c.n_edges)])
    return 1 - 2 * bits


def _twisted(c: FanWuGraph, signs: np.ndarray, twist: tuple[int, int]) -> np.ndarray:
    d = c.displacement
    flip = (twist[0] * d[:, 0] + twist[1] * d[:, 1]) & 1
    return signs * (1 - 2 * flip)


def kasteleyn_matrix(c: FanWuGraph, omega: KasteleynOrientation, z: complex = 1, w: complex = 1) -> np.ndarray:
    """K[w, b] = sum over C_G edges w -> b of omega * phase * y."""
    K = np.zeros((c.n_white, c.n_black), dtype=complex)
    vals = omega.signs * c.phases(z, w) * c.weight
    np.add.at(K, (c.white, c.black), vals)
    return K


def kasteleyn_determinant(c: FanWuGraph, omega: KasteleynOrientation, z: complex = 1, w: complex = 1) -> complex:
    return complex(np.linalg.det(kasteleyn_matrix(c, omega, z, w)))


def prefactor(c: FanWuGraph) -> float:
    """2**-|V(G)| * prod(1 + x_e**2)."""
    return float(2.0 ** (-c.graph.n_vertices) * np.prod(1 + c.x**2))


def scaled_determinant(c: FanWuGraph, omega: KasteleynOrientation, z: complex = 1, w: complex = 1) -> complex:
    """Kasteleyn side of the Kac-Ward correspondence, normalized by the recorded constant."""
    return prefactor(c) * kasteleyn_determinant(c, omega, z, w) / omega.constant


def kasteleyn_orientation(c: FanWuGraph) -> KasteleynOrientation:
    """An admissible orientation in the class matching the Kac-Ward determinant.

    The GF(2) face system fixes the orientation up to a coboundary and one of
    four torus classes.  The class is chosen so that the scaled Kasteleyn
    determinant is a constant multiple of the Kac-Ward determinant, and that
    unit-modulus constant is recorded on the result.
    """
    base = _raw_orientation(c)
    op = KacWardOperator(c.graph, c.x)
    points = [(np.exp(1j * a), np.exp(1j * b)) for a, b in _REFERENCE_PHASES]
    kw = np.array([complex(op.det(z, w)) for z, w in points])
    best = None
    for twist in ((0, 0), (1, 0), (0, 1), (1, 1)):
        trial = KasteleynOrientation(_twisted(c, base, twist), twist)
        ratios = np.array([scaled_determinant(c, trial, z, w) for z, w in points]) / kw
        spread = float(np.abs(ratios - ratios.mean()).max())
        if best is None or spread < best[0]:
            best = (spread, trial, complex(ratios.mean()))
    spread, trial, const = best
    if spread > 1e-8 or abs(abs(const) - 1) > 1e-8:
        raise NoOrientation(f"no orientation class reproduces the Kac-Ward determinant (spread {spread:.2e})")
    return KasteleynOrientation(trial.signs, trial.twist, const / abs(const))


# ----------------------------------------------------------------------
# brute-force matchings


def signed_matching_sum(K: np.ndarray, cap: int = 16) -> complex:
    """Sum over perfect matchings of sign(permutation) * product of entries."""
    n = K.shape[0]
    if n > cap:
        raise TooLarge(f"{n} black vertices exceed the matching cap {cap}")
    cols = [np.flatnonzero(K[i]).tolist() for i in range(n)]
    used = [False] * n
    total = 0j

    def rec(i, acc, inversions):
        nonlocal total
        if i == n:
            total += -acc if inversions & 1 else acc
            return
        for j in cols[i]:
            if used[j]:
                continue
            above = sum(used[j + 1:])
            used[j] = True
            rec(i + 1, acc * K[i, j], inversions + above)
            used[j] = False

    rec(0, 1.0 + 0j, 0)
    return total


def matching_oracle(c: FanWuGraph, omega: KasteleynOrientation, z: complex = 1, w: complex = 1, cap: int = 16) -> complex:
    if c.n_black > cap:
        raise TooLarge(f"{c.n_black} black vertices exceed the matching cap {cap}")
    return signed_matching_sum(kasteleyn_matrix(c, omega, z, w), cap=cap)


# ----------------------------------------------------------------------
# Kramers-Wannier duality


def dual_weights(x):
    """x* solving x + x* + x x* = 1."""
    x = np.asarray(x, dtype=float)
    return (1 - x) / (1 + x)


def _kw_side(g: ToricGraph, x: np.ndarray, z, w) -> complex:
    return 2.0 ** g.n_vertices / np.prod(1 + x) * complex(KacWardOperator(g, x).det(z, w))


def duality_check(g: ToricGraph, x, z: complex = 1, w: complex = 1, g_dual: ToricGraph | None = None) -> float:
    """Relative gap between the two sides of the determinant duality."""
    x = as_weights(g, x)
    gd = dual(g) if g_dual is None else g_dual
    lhs = _kw_side(g, x, z, w)
    rhs = _kw_side(gd, dual_weights(x), z, w)
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def signed_duality_check(g: ToricGraph, x, cap: int = DEFAULT_CAP, g_dual: ToricGraph | None = None) -> dict[tuple[int, int], float]:
    """Residuals of the signed square-root duality at the four half periods.

    The (1, 1) branch carries a minus sign, all others a plus sign.
    """
    x = as_weights(g, x)
    xs = dual_weights(x)
    gd = dual(g) if g_dual is None else g_dual
    r = half_period_roots(g, x, cap=cap, method="oracle")
    rs = half_period_roots(gd, xs, cap=cap, method="oracle")
    a = 2.0 ** (g.n_vertices / 2) / np.sqrt(np.prod(1 + x))
    b = 2.0 ** (gd.n_vertices / 2) / np.sqrt(np.prod(1 + xs))
    out = {}
    for p in HALF_PERIODS:
        sign = -1.0 if p == (1, 1) else 1.0
        lhs, rhs = a * r[p], sign * b * rs[p]
        out[p] = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
    return out
