import io

import pytest

from kacward.cli import main
from kacward.examples import NAMES


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_betac():
    code, text = run("betac", "example:square")
    assert code == 0
    assert text.startswith("beta_c=0.4406867935097")
    assert "method=oracle-bisection" in text


def test_betac_determinant():
    code, text = run("betac", "example:hex", "--method", "determinant")
    assert code == 0
    assert "method=determinant-minimization" in text


def test_spectral_grid():
    code, text = run("spectral", "example:square", "--beta", "0.3", "--grid", "4")
    rows = text.strip().splitlines()
    assert code == 0 and len(rows) == 16
    assert all(len(r.split()) == 3 for r in rows)


def test_spectral_point():
    code, text = run("spectral", "example:square", "--beta", "0.44068679350977147", "--z-exp", "0", "--w-exp", "0")
    assert code == 0
    assert abs(float(text.split()[2])) < 1e-12


def test_freeenergy():
    code, text = run("freeenergy", "example:tri", "--beta", "0.2")
    keys = dict(line.split("=") for line in text.strip().splitlines())
    assert code == 0
    assert set(keys) == {"log_z_x", "error", "grid", "singular", "ising"}
    assert keys["singular"] == "false"


@pytest.mark.parametrize("name", ["square", "hex", "rect21"])
def test_verify_passes(name):
    code, text = run("verify", f"example:{name}", "--beta", "0.3")
    assert code == 0
    assert "status=fail" not in text
    assert text.count("status=pass") >= 6


def test_verify_fails_with_impossible_tolerance():
    code, text = run("verify", "example:tri", "--beta", "0.3", "--tol", "0")
    assert code == 3
    assert "status=fail" in text


def test_dualize_round_trip(tmp_path):
    code, text = run("dualize", "example:hex", "--beta", "0.4")
    assert code == 0
    path = tmp_path / "dual.kw"
    path.write_text(text)
    code, again = run("example", "tri")
    assert code == 0
    code, verify = run("verify", str(path))
    assert code == 0


@pytest.mark.parametrize("name", NAMES)
def test_emit_and_reload(name, tmp_path):
    code, text = run("example", name, "--emit")
    assert code == 0
    path = tmp_path / f"{name}.kw"
    path.write_text(text)
    assert run("betac", str(path)) == run("betac", f"example:{name}")


def test_repeatable():
    assert run("freeenergy", "example:hex", "--beta", "0.5") == run("freeenergy", "example:hex", "--beta", "0.5")


def test_parse_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.kw"
    path.write_text("lattice 1 0 0 1\nvertex v 0 0\nedge e v q 1 0 J=1\n")
    code, _ = run("betac", str(path))
    assert code == 1
    assert "line 3" in capsys.readouterr().err


def test_invalid_graph_exit(tmp_path):
    path = tmp_path / "deg.kw"
    path.write_text("lattice 1 0 0 1\nvertex v 0 0\nedge a v v 1 0 J=1\nedge b v v 1 0 J=1\n")
    assert run("betac", str(path))[0] == 2


def test_missing_file():
    assert run("betac", "/nonexistent/graph.kw")[0] == 1


def test_unknown_example():
    assert run("betac", "example:pentagon")[0] == 1


def test_bad_grid():
    with pytest.raises(SystemExit):
        run("spectral", "example:square", "--grid", "0")


def test_requires_subcommand():
    with pytest.raises(SystemExit):
        run()
