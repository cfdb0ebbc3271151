"""Line-oriented text format for toric graphs.

Grammar (UTF-8, one record per line, ``#`` starts a comment, blank lines
are ignored)::

    lattice <a1x> <a1y> <a2x> <a2y>
    vertex  <name> <px> <py>
    edge    <name> <u> <v> <d1> <d2> J=<positive real>
    edge    <name> <u> <v> <d1> <d2> x=<real in (0,1)>

``lattice`` appears exactly once, before any edge.  Vertices must be
declared before the edges that use them; names are unique within their
kind and contain no whitespace.  ``d1``/``d2`` are integers and the edge
runs from ``u`` to ``v + d1*a1 + d2*a2``.
"""

from __future__ import annotations

import math

from .errors import ParseError
from .toric_graph import Edge, ToricGraph, Vertex


def _float(token, line):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite number {token!r}", line)
    return value


def _int(token, line):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", line) from None


def loads(text: str) -> ToricGraph:
    basis = None
    vertices: list[Vertex] = []
    vindex: dict[str, int] = {}
    edges: list[Edge] = []
    enames: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        if kind == "lattice":
            if basis is not None:
                raise ParseError("duplicate lattice record", lineno)
            if len(args) != 4:
                raise ParseError("lattice takes 4 numbers", lineno)
            vals = [_float(a, lineno) for a in args]
            basis = [vals[:2], vals[2:]]
            if abs(vals[0] * vals[3] - vals[1] * vals[2]) < 1e-14:
                raise ParseError("lattice vectors are linearly dependent", lineno)
        elif kind == "vertex":
            if len(args) != 3:
                raise ParseError("vertex takes a name and 2 coordinates", lineno)
            name = args[0]
            if name in vindex:
                raise ParseError(f"duplicate vertex {name!r}", lineno)
            vindex[name] = len(vertices)
            vertices.append(Vertex(name, (_float(args[1], lineno), _float(args[2], lineno))))
        elif kind == "edge":
            if basis is None:
                raise ParseError("edge before lattice record", lineno)
            if len(args) != 6:
                raise ParseError("edge takes name, u, v, d1, d2 and J=... or x=...", lineno)
            name, u, v, d1, d2, wtok = args
            if name in enames:
                raise ParseError(f"duplicate edge {name!r}", lineno)
            for end in (u, v):
                if end not in vindex:
                    raise ParseError(f"unknown vertex {end!r}", lineno)
            key, sep, val = wtok.partition("=")
            if not sep or key not in ("J", "x"):
                raise ParseError(f"expected J=<value> or x=<value>, got {wtok!r}", lineno)
            value = _float(val, lineno)
            if key == "J":
                if value <= 0:
                    raise ParseError("coupling J must be positive", lineno)
                coupling, weight = value, None
            else:
                if not 0 < value < 1:
                    raise ParseError("weight x must lie in (0, 1)", lineno)
                coupling, weight = None, value
            enames.add(name)
            edges.append(
                Edge(name, vindex[u], vindex[v], (_int(d1, lineno), _int(d2, lineno)), coupling, weight)
            )
        else:
            raise ParseError(f"unknown record {kind!r}", lineno)
    if basis is None:
        raise ParseError("missing lattice record")
    if not vertices:
        raise ParseError("no vertices")
    return ToricGraph(basis, vertices, edges)


def load(path) -> ToricGraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(g: ToricGraph) -> str:
    (a1x, a1y), (a2x, a2y) = (map(float, row) for row in g.basis)
    out = []
    out.append(f"lattice {a1x!r} {a1y!r} {a2x!r} {a2y!r}")
    for v in g.vertices:
        out.append(f"vertex {v.name} {float(v.pos[0])!r} {float(v.pos[1])!r}")
    for e in g.edges:
        if e.coupling is not None:
            w = f"J={float(e.coupling)!r}"
        else:
            w = f"x={float(e.weight)!r}"
        out.append(
            f"edge {e.name} {g.vertices[e.u].name} {g.vertices[e.v].name} "
            f"{e.disp[0]} {e.disp[1]} {w}"
        )
    return "\n".join(out) + "\n"
