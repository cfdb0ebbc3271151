"""Canonical fundamental domains of the standard lattices."""

from __future__ import annotations

import math

import numpy as np

from .errors import UnknownExample
from .toric_graph import Edge, ToricGraph, Vertex, isoradial_coupling

NAMES = ("square", "hex", "tri", "rect21", "rect-iso")


def square(J=1.0) -> ToricGraph:
    """Square lattice: one vertex, two loops."""
    J = np.broadcast_to(np.asarray(J, dtype=float), (2,))
    return ToricGraph(
        [[1.0, 0.0], [0.0, 1.0]],
        [Vertex("v", (0.0, 0.0))],
        [
            Edge("h", 0, 0, (1, 0), float(J[0])),
            Edge("v", 0, 0, (0, 1), float(J[1])),
        ],
        meta={"name": "square"},
    )


def hexagonal(J=1.0) -> ToricGraph:
    """Hexagonal lattice with unit edge length: two vertices, three edges."""
    J = np.broadcast_to(np.asarray(J, dtype=float), (3,))
    s = math.sqrt(3.0)
    return ToricGraph(
        [[s, 0.0], [s / 2, 1.5]],
        [Vertex("a", (0.0, 0.0)), Vertex("b", (0.0, 1.0))],
        [
            Edge("e1", 0, 1, (0, 0), float(J[0])),
            Edge("e2", 0, 1, (0, -1), float(J[1])),
            Edge("e3", 0, 1, (1, -1), float(J[2])),
        ],
        meta={"name": "hex"},
    )


def triangular(J=1.0) -> ToricGraph:
    """Triangular lattice with unit edge length: one vertex, three loops."""
    J = np.broadcast_to(np.asarray(J, dtype=float), (3,))
    return ToricGraph(
        [[1.0, 0.0], [0.5, math.sqrt(3.0) / 2]],
        [Vertex("v", (0.0, 0.0))],
        [
            Edge("e1", 0, 0, (1, 0), float(J[0])),
            Edge("e2", 0, 0, (0, 1), float(J[1])),
            Edge("e3", 0, 0, (-1, 1), float(J[2])),
        ],
        meta={"name": "tri"},
    )


def rect21(J=(1.0, 1.0, 1.0, 1.0)) -> ToricGraph:
    """2 x 1 square domain with four independent couplings.

    Edges 1 and 2 are the horizontal edges, 3 and 4 the vertical loops.
    """
    J = np.broadcast_to(np.asarray(J, dtype=float), (4,))
    return ToricGraph(
        [[2.0, 0.0], [0.0, 1.0]],
        [Vertex("a", (0.0, 0.0)), Vertex("b", (1.0, 0.0))],
        [
            Edge("x1", 0, 1, (0, 0), float(J[0])),
            Edge("x2", 1, 0, (1, 0), float(J[1])),
            Edge("x3", 0, 0, (0, 1), float(J[2])),
            Edge("x4", 1, 1, (0, 1), float(J[3])),
        ],
        meta={"name": "rect21"},
    )


def rect_iso(theta: float = math.pi / 3) -> ToricGraph:
    """Rectangular lattice inscribed in unit circles.

    Horizontal edges have half-rhombus angle ``theta`` and vertical edges
    ``pi/2 - theta``; couplings are the isoradial ones, so beta_c = 1.
    """
    if not 0 < theta < math.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    jh, jv = isoradial_coupling([theta, math.pi / 2 - theta])
    return ToricGraph(
        [[2 * math.cos(theta), 0.0], [0.0, 2 * math.sin(theta)]],
        [Vertex("v", (0.0, 0.0))],
        [
            Edge("h", 0, 0, (1, 0), float(jh)),
            Edge("v", 0, 0, (0, 1), float(jv)),
        ],
        meta={"name": "rect-iso", "theta": theta},
    )


_BUILDERS = {
    "square": square,
    "hex": hexagonal,
    "tri": triangular,
    "rect21": rect21,
    "rect-iso": rect_iso,
}


def builtin(name: str, **kwargs) -> ToricGraph:
    """Look up a built-in graph by name.

    ``rect-iso`` also accepts the angle inline, e.g. ``rect-iso:0.5236``.
    """
    base, _, arg = name.partition(":")
    if base not in _BUILDERS:
        raise UnknownExample(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
    if arg:
        if base != "rect-iso":
            raise UnknownExample(f"example {base!r} takes no parameter")
        kwargs["theta"] = float(arg)
    return _BUILDERS[base](**kwargs)
