"""Weighted graphs embedded with straight edges in a flat torus.

A :class:`ToricGraph` is the quotient of a doubly periodic planar graph by its
translation lattice.  Every edge stores an integer displacement ``(d1, d2)``:
the straight segment runs from ``pos(u)`` to ``pos(v) + d1*a1 + d2*a2``.

Oriented edges are indexed ``0 .. 2|E|-1``; edge ``i`` yields the forward
oriented edge ``2*i`` (``u -> v``) and its reversal ``2*i + 1``.  Reversal is
therefore ``e ^ 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    BacktrackPair,
    DegenerateEmbedding,
    Disconnected,
    NotIncident,
    NotIsoradial,
    RotationTie,
    ZeroLengthEdge,
)

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class Vertex:
    name: str
    pos: tuple[float, float]


@dataclass(frozen=True)
class Edge:
    name: str
    u: int
    v: int
    disp: tuple[int, int]
    coupling: float | None = None
    weight: float | None = None


def reverse(e: int) -> int:
    return e ^ 1


def edge_of(e: int) -> int:
    return e >> 1


@dataclass(frozen=True, eq=False)
class ToricGraph:
    basis: np.ndarray
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float).reshape(2, 2)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_oriented(self) -> int:
        return 2 * len(self.edges)

    # ------------------------------------------------------------------
    # oriented-edge tables

    @cached_property
    def positions(self) -> np.ndarray:
        return np.array([v.pos for v in self.vertices], dtype=float).reshape(-1, 2)

    @cached_property
    def origin(self) -> np.ndarray:
        out = np.empty(self.n_oriented, dtype=int)
        out[0::2] = [e.u for e in self.edges]
        out[1::2] = [e.v for e in self.edges]
        return out

    @cached_property
    def terminus(self) -> np.ndarray:
        return self.origin.reshape(-1, 2)[:, ::-1].reshape(-1).copy()

    @cached_property
    def displacement(self) -> np.ndarray:
        """Integer lattice displacement of each oriented edge, shape (2E, 2)."""
        d = np.array([e.disp for e in self.edges], dtype=int).reshape(-1, 2)
        out = np.empty((self.n_oriented, 2), dtype=int)
        out[0::2] = d
        out[1::2] = -d
        return out

    @cached_property
    def direction(self) -> np.ndarray:
        """Planar vector of each oriented edge, shape (2E, 2)."""
        p = self.positions
        fwd = np.array(
            [p[e.v] + np.asarray(e.disp) @ self.basis - p[e.u] for e in self.edges],
            dtype=float,
        ).reshape(-1, 2)
        out = np.empty((self.n_oriented, 2))
        out[0::2] = fwd
        out[1::2] = -fwd
        return out

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        """Oriented edges leaving each vertex in counterclockwise order."""
        self._check_lengths()
        ang = np.arctan2(self.direction[:, 1], self.direction[:, 0])
        groups: list[list[int]] = [[] for _ in self.vertices]
        for e, v in enumerate(self.origin):
            groups[v].append(e)
        result = []
        for v, group in enumerate(groups):
            group.sort(key=lambda e: ang[e])
            for a, b in zip(group, group[1:]):
                if abs(ang[a] - ang[b]) < _TIE_TOL:
                    raise RotationTie(
                        f"edges {self.edges[edge_of(a)].name!r} and "
                        f"{self.edges[edge_of(b)].name!r} leave vertex "
                        f"{self.vertices[v].name!r} in the same direction"
                    )
            if len(group) > 1 and abs(ang[group[0]] + 2 * math.pi - ang[group[-1]]) < _TIE_TOL:
                raise RotationTie(f"direction tie at vertex {self.vertices[v].name!r}")
            result.append(tuple(group))
        return tuple(result)

    @cached_property
    def rotation(self) -> np.ndarray:
        """Successor map R: next oriented edge counterclockwise around o(e)."""
        succ = np.empty(self.n_oriented, dtype=int)
        for group in self.out_edges:
            for i, e in enumerate(group):
                succ[e] = group[(i + 1) % len(group)]
        return succ

    @cached_property
    def rotation_inv(self) -> np.ndarray:
        inv = np.empty_like(self.rotation)
        inv[self.rotation] = np.arange(self.n_oriented)
        return inv

    @cached_property
    def face_next(self) -> np.ndarray:
        """Next oriented edge along the face lying to the left of ``e``."""
        return self.rotation_inv[np.arange(self.n_oriented) ^ 1]

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        seen = np.zeros(self.n_oriented, dtype=bool)
        faces = []
        nxt = self.face_next
        for start in range(self.n_oriented):
            if seen[start]:
                continue
            cycle = []
            e = start
            while not seen[e]:
                seen[e] = True
                cycle.append(e)
                e = int(nxt[e])
            faces.append(tuple(cycle))
        return tuple(faces)

    @cached_property
    def face_of(self) -> np.ndarray:
        """Index of the face lying to the left of each oriented edge."""
        out = np.empty(self.n_oriented, dtype=int)
        for i, f in enumerate(self.faces):
            out[list(f)] = i
        return out

    @cached_property
    def turning_angles(self) -> np.ndarray:
        """beta_e in (0, 2pi): the counterclockwise angle from e to R(e)."""
        out = np.empty(self.n_oriented)
        for e in range(self.n_oriented):
            r = int(self.rotation[e])
            if r == e:
                out[e] = 2 * math.pi
            else:
                out[e] = math.pi - self.angle(reverse(r), e)
        return out

    # ------------------------------------------------------------------
    # geometry

    def angle(self, e: int, e2: int) -> float:
        """Signed turning angle in (-pi, pi) from oriented edge e to e2."""
        if e2 == reverse(e):
            raise BacktrackPair(f"{e2} is the reversal of {e}")
        if self.terminus[e] != self.origin[e2]:
            raise NotIncident(f"t({e}) != o({e2})")
        a, b = self.direction[e], self.direction[e2]
        return math.atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1])

    def cocycle_phase(self, e: int, z: complex, w: complex) -> complex:
        """z**d1 * w**d2 for the displacement (d1, d2) of oriented edge e."""
        d1, d2 = self.displacement[e]
        return complex(z) ** int(d1) * complex(w) ** int(d2)

    def phases(self, z: complex, w: complex) -> np.ndarray:
        """Vector of cocycle phases of all oriented edges."""
        d = self.displacement
        return np.power(complex(z), d[:, 0]) * np.power(complex(w), d[:, 1])

    def face_lift(self, f: int) -> tuple[np.ndarray, np.ndarray]:
        """Planar lift of face ``f``.

        Returns the corner points of the boundary walk and, for each boundary
        edge, the lattice shift between the lifted copy of its origin and the
        copy stored in ``positions``.
        """
        cycle = self.faces[f]
        start = self.positions[self.origin[cycle[0]]]
        corners = [start]
        shifts = [np.zeros(2, dtype=int)]
        for e in cycle[:-1]:
            corners.append(corners[-1] + self.direction[e])
            shifts.append(shifts[-1] + self.displacement[e])
        return np.array(corners), np.array(shifts)

    def _check_lengths(self):
        lengths = np.hypot(self.direction[0::2, 0], self.direction[0::2, 1])
        scale = max(1.0, float(np.abs(self.basis).max()))
        for i, length in enumerate(lengths):
            if length <= 1e-12 * scale:
                raise ZeroLengthEdge(f"edge {self.edges[i].name!r} has zero length")

    # ------------------------------------------------------------------

    def with_edges(self, edges: Sequence[Edge]) -> "ToricGraph":
        return replace(self, edges=tuple(edges), meta=dict(self.meta))

    def couplings(self) -> np.ndarray:
        missing = [e.name for e in self.edges if e.coupling is None]
        if missing:
            raise ValueError(f"edges without coupling J: {', '.join(missing)}")
        return np.array([e.coupling for e in self.edges], dtype=float)

    def weights(self, beta: float | None = None) -> np.ndarray:
        """Per-edge x_e: tanh(beta*J_e) for coupled edges, the stored x otherwise."""
        out = np.empty(self.n_edges)
        for i, e in enumerate(self.edges):
            if e.coupling is not None and beta is not None:
                out[i] = math.tanh(beta * e.coupling)
            elif e.weight is not None:
                out[i] = e.weight
            elif e.coupling is not None:
                raise ValueError(f"edge {e.name!r} has a coupling J; a beta is required")
            else:
                raise ValueError(f"edge {e.name!r} carries neither J nor x")
        return out

    def __repr__(self):
        return f"ToricGraph(V={self.n_vertices}, E={self.n_edges})"


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    n_faces: int
    euler: int
    face_displacements: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return (
            self.connected
            and self.euler == 0
            and all(d == (0, 0) for d in self.face_displacements)
        )


def _connected(g: ToricGraph) -> bool:
    if g.n_vertices == 0:
        return False
    parent = list(range(g.n_vertices))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in g.edges:
        parent[find(e.u)] = find(e.v)
    return len({find(v) for v in range(g.n_vertices)}) == 1


def inspect(g: ToricGraph) -> ValidationReport:
    """Compute the validation report without raising on failed checks.

    Geometric errors (zero-length edges, direction ties) still raise since
    faces cannot be traced without a rotation system.
    """
    faces = g.faces
    disp = g.displacement
    sums = tuple(tuple(int(s) for s in disp[list(f)].sum(axis=0)) for f in faces)
    return ValidationReport(
        connected=_connected(g),
        n_faces=len(faces),
        euler=g.n_vertices - g.n_edges + len(faces),
        face_displacements=sums,
    )


def validate(g: ToricGraph) -> ValidationReport:
    """Check non-degeneracy of the embedding; raise on the first failure."""
    if g.n_edges == 0:
        raise DegenerateEmbedding("graph has no edges")
    report = inspect(g)
    if not report.connected:
        raise Disconnected("graph is not connected")
    if report.euler != 0:
        raise DegenerateEmbedding(
            f"V - E + F = {report.euler}; faces are not discs on the torus"
        )
    bad = [i for i, d in enumerate(report.face_displacements) if d != (0, 0)]
    if bad:
        raise DegenerateEmbedding(f"faces {bad} wrap around the torus")
    return report


# ----------------------------------------------------------------------
# derived graphs


def _reduce(point: np.ndarray, basis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a planar point into (fundamental-domain point, lattice vector)."""
    coords = np.linalg.solve(basis.T, point)
    n = np.floor(coords + 1e-12).astype(int)
    return (coords - n) @ basis, n


def dual(g: ToricGraph) -> ToricGraph:
    """Dual toric graph G*, one vertex per face of G.

    Dual edge i crosses edge i of G from its right face to its left face and
    keeps the coupling and weight fields of edge i.
    """
    validate(g)
    reps = []
    offsets = []
    for f in range(len(g.faces)):
        corners, _ = g.face_lift(f)
        p, n = _reduce(corners.mean(axis=0), g.basis)
        reps.append(p)
        offsets.append(n)
    # lattice position of each face copy relative to the stored copy of each boundary edge
    shift_of = np.empty((g.n_oriented, 2), dtype=int)
    for f, cycle in enumerate(g.faces):
        _, shifts = g.face_lift(f)
        for e, s in zip(cycle, shifts):
            shift_of[e] = offsets[f] - s
    vertices = [Vertex(f"f{f}", (float(p[0]), float(p[1]))) for f, p in enumerate(reps)]
    edges = []
    for i, e in enumerate(g.edges):
        fwd, bwd = 2 * i, 2 * i + 1
        left, right = int(g.face_of[fwd]), int(g.face_of[bwd])
        d = shift_of[fwd] - (shift_of[bwd] + np.asarray(e.disp))
        edges.append(replace(e, u=right, v=left, disp=(int(d[0]), int(d[1]))))
    return ToricGraph(g.basis.copy(), vertices, edges, meta={"dual_of": g.meta.get("name")})


def enlarge(g: ToricGraph, n: int, m: int) -> ToricGraph:
    """The n x m cover G_nm, fundamental domain spanned by n*a1 and m*a2."""
    if n < 1 or m < 1:
        raise ValueError("enlargement factors must be positive")
    if n == 1 and m == 1:
        return g
    a1, a2 = g.basis
    vertices = []
    for j in range(m):
        for i in range(n):
            for v in g.vertices:
                p = np.asarray(v.pos) + i * a1 + j * a2
                vertices.append(Vertex(f"{v.name}_{i}_{j}", (float(p[0]), float(p[1]))))
    nv = g.n_vertices

    def index(v, i, j):
        return (j * n + i) * nv + v

    edges = []
    for j in range(m):
        for i in range(n):
            for e in g.edges:
                ti, tj = i + e.disp[0], j + e.disp[1]
                edges.append(
                    replace(
                        e,
                        name=f"{e.name}_{i}_{j}",
                        u=index(e.u, i, j),
                        v=index(e.v, ti % n, tj % m),
                        disp=(ti // n, tj // m),
                    )
                )
    return ToricGraph(np.array([n * a1, m * a2]), vertices, edges, meta=dict(g.meta))


# ----------------------------------------------------------------------
# isoradial weights


def _circumcenter(pts: np.ndarray) -> tuple[np.ndarray, float]:
    a, b, c = pts[0], pts[1], pts[2]
    d = 2 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    if abs(d) < 1e-14:
        raise NotIsoradial("collinear face corners")
    bb = b - a
    cc = c - a
    ux = ((c[1] - a[1]) * bb @ bb - (b[1] - a[1]) * cc @ cc) / d
    uy = ((b[0] - a[0]) * cc @ cc - (c[0] - a[0]) * bb @ bb) / d
    center = a + np.array([ux, uy])
    return center, float(np.hypot(*(center - a)))


def rhombus_angles(g: ToricGraph, rtol: float = 1e-9) -> np.ndarray:
    """Half-rhombus angle of every edge of an isoradially embedded graph.

    Every face must be inscribed in a circle of one common radius; the
    radius itself is irrelevant since only angles enter the couplings.
    """
    validate(g)
    theta = np.full(g.n_oriented, np.nan)
    radii = []
    for f, cycle in enumerate(g.faces):
        corners, _ = g.face_lift(f)
        if len(corners) < 3:
            raise NotIsoradial(f"face {f} has fewer than three corners")
        center, r = _circumcenter(corners)
        if not np.allclose(np.hypot(*(corners - center).T), r, rtol=rtol, atol=0):
            raise NotIsoradial(f"face {f} is not cyclic")
        radii.append(r)
        for e, p in zip(cycle, corners):
            a = g.direction[e]
            b = center - p
            theta[e] = math.atan2(a[0] * b[1] - a[1] * b[0], a @ b)
    if not np.allclose(radii, radii[0], rtol=rtol, atol=0):
        raise NotIsoradial("faces have different circumradii")
    fwd, bwd = theta[0::2], theta[1::2]
    if not np.allclose(fwd, bwd, atol=1e-9):
        raise NotIsoradial("rhombus sides differ across an edge")
    bad = (fwd <= 1e-12) | (fwd >= math.pi / 2 - 1e-12)
    if bad.any():
        names = [g.edges[i].name for i in np.flatnonzero(bad)]
        raise NotIsoradial(f"half-rhombus angle outside (0, pi/2) on edges {names}")
    return fwd


def isoradial_coupling(theta):
    """J = 1/2 log((1 + sin theta) / cos theta)."""
    theta = np.asarray(theta, dtype=float)
    return 0.5 * np.log((1 + np.sin(theta)) / np.cos(theta))


def isoradial_couplings(g: ToricGraph) -> np.ndarray:
    """Couplings making beta = 1 critical on an isoradial graph."""
    return isoradial_coupling(rhombus_angles(g))


def with_couplings(g: ToricGraph, couplings) -> ToricGraph:
    couplings = np.broadcast_to(np.asarray(couplings, dtype=float), (g.n_edges,))
    return g.with_edges(
        replace(e, coupling=float(j), weight=None) for e, j in zip(g.edges, couplings)
    )


def with_weights(g: ToricGraph, weights) -> ToricGraph:
    weights = np.broadcast_to(np.asarray(weights, dtype=float), (g.n_edges,))
    return g.with_edges(
        replace(e, coupling=None, weight=float(x)) for e, x in zip(g.edges, weights)
    )


# ----------------------------------------------------------------------
# weights


@dataclass(frozen=True, eq=False)
class WeightSystem:
    """High-temperature weights x_e in (0, 1), with optional provenance."""

    x: np.ndarray
    beta: float | None = None
    couplings: np.ndarray | None = None

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @classmethod
    def from_beta(cls, beta: float, couplings) -> "WeightSystem":
        couplings = np.asarray(couplings, dtype=float)
        return cls(np.tanh(beta * couplings), beta=beta, couplings=couplings)

    @classmethod
    def from_angles(cls, theta) -> "WeightSystem":
        return cls(np.tan(np.asarray(theta, dtype=float) / 2))

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.arctan(self.x)

    def dual(self) -> "WeightSystem":
        return WeightSystem((1 - self.x) / (1 + self.x))

    def __len__(self):
        return len(self.x)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.x, dtype=dtype)


def as_weights(g: ToricGraph, x) -> np.ndarray:
    """Broadcast a scalar, sequence or WeightSystem to a per-edge float array."""
    if isinstance(x, WeightSystem):
        x = x.x
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = np.full(g.n_edges, float(arr))
    if arr.shape != (g.n_edges,):
        raise ValueError(f"expected {g.n_edges} weights, got shape {arr.shape}")
    return arr
