import pytest

from kacward import graphfile
from kacward.errors import ParseError
from kacward.examples import NAMES, builtin

TEXT = """\
# two-vertex strip
lattice 2 0 0 1
vertex a 0 0
vertex b 1 0   # right
edge x1 a b 0 0 J=1.5
edge x2 b a 1 0 x=0.25
edge x3 a a 0 1 J=1
edge x4 b b 0 1 J=1
"""


def test_parse():
    g = graphfile.loads(TEXT)
    assert (g.n_vertices, g.n_edges) == (2, 4)
    assert g.edges[0].coupling == 1.5
    assert g.edges[1].weight == 0.25
    assert g.edges[1].disp == (1, 0)


@pytest.mark.parametrize("name", NAMES)
def test_round_trip(name):
    text = graphfile.dumps(builtin(name))
    again = graphfile.dumps(graphfile.loads(text))
    assert again == text


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("lattice 1 0 0 1\nvertex v 0 0\nedge e v w 1 0 J=1\n", 3, "unknown vertex"),
        ("lattice 1 0 0 1\nvertex v 0 0\nedge e v v 1 0 J=-1\n", 3, "positive"),
        ("lattice 1 0 0 1\nvertex v 0 0\nedge e v v 1 0 x=1.5\n", 3, "(0, 1)"),
        ("lattice 1 0 0\n", 1, "4 numbers"),
        ("lattice 1 0 0 1\n\nvertex v 0 zero\n", 3, "number"),
        ("lattice 1 0 0 1\nvertex v 0 0\nedge e v v 1.5 0 J=1\n", 3, "integer"),
        ("lattice 1 0 0 1\nvertex v 0 0\nfoo\n", 3, "unknown record"),
        ("lattice 1 0 0 1\nvertex v 0 0\nedge e v v 1 0 K=1\n", 3, "J=<value>"),
        ("lattice 1 0 2 0\n", 1, "dependent"),
    ],
)
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as info:
        graphfile.loads(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert f"line {line}" in str(info.value)


def test_missing_lattice():
    with pytest.raises(ParseError):
        graphfile.loads("vertex v 0 0\n")
