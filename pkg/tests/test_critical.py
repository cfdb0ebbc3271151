import math

import numpy as np
import pytest

from kacward.critical import (
    critical_beta,
    critical_identity_residual,
    determinant_residual,
    phase_indicator,
)
from kacward.errors import BracketFailure
from kacward.examples import NAMES, builtin
from kacward.fan_wu import dual_weights
from kacward.kac_ward import half_period_roots
from kacward.toric_graph import enlarge

SQUARE = 0.5 * math.log(1 + math.sqrt(2))
HEX = 0.5 * math.log(2 + math.sqrt(3))
TRI = 0.5 * math.log(math.sqrt(3))


@pytest.mark.parametrize("name,expected", [("square", SQUARE), ("hex", HEX), ("tri", TRI)])
@pytest.mark.parametrize("method", ["oracle", "determinant"])
def test_known_values(name, expected, method):
    cp = critical_beta(builtin(name), method=method)
    assert cp.beta == pytest.approx(expected, abs=1e-10)
    assert cp.bracket[0] < cp.beta < cp.bracket[1]


def test_method_tags():
    g = builtin("square")
    assert critical_beta(g).method == "oracle-bisection"
    assert critical_beta(g, method="determinant").method == "determinant-minimization"
    assert critical_beta(g, cap=1).method == "determinant-minimization"


def test_tolerance_floor():
    with pytest.raises(ValueError):
        critical_beta(builtin("square"), tol=1e-14)


def test_no_bracket():
    with pytest.raises(BracketFailure):
        critical_beta(builtin("square"), bracket=(1e-6, 1e-2))
    with pytest.raises(BracketFailure):
        critical_beta(builtin("square"), method="determinant", bracket=(1e-6, 1e-2))


def test_rect21_symmetric_matches_square():
    assert critical_beta(builtin("rect21")).beta == pytest.approx(SQUARE, abs=1e-12)


def test_rect21_identity(rng):
    for _ in range(5):
        J = rng.uniform(0.3, 2.0, 4)
        g = builtin("rect21", J=J)
        cp = critical_beta(g)
        assert critical_identity_residual(g, beta=cp.beta) < 1e-12
        assert determinant_residual(g, None, cp.beta) < 1e-12


@pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 4, math.pi / 3, 0.2, 1.3])
def test_isoradial(theta):
    assert critical_beta(builtin("rect-iso", theta=theta)).beta == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("lam", [0.25, 3.0, 17.0])
def test_coupling_scaling(lam):
    g = builtin("tri")
    base = critical_beta(g).beta
    assert critical_beta(g, J=lam).beta * lam == pytest.approx(base, rel=1e-10)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("n,m", [(1, 2), (2, 1), (2, 2)])
def test_domain_invariance(name, n, m):
    g = builtin(name)
    assert critical_beta(enlarge(g, n, m)).beta == pytest.approx(critical_beta(g).beta, abs=1e-8)


def test_self_dual_square():
    x = math.tanh(critical_beta(builtin("square")).beta)
    assert x == pytest.approx(float(dual_weights(x)), abs=1e-10)


@pytest.mark.parametrize("name", NAMES)
def test_uniqueness_probe(name):
    g = builtin(name)
    J = g.couplings()
    betas = np.geomspace(1e-4, 1e2, 200)
    r = np.array([half_period_roots(g, np.tanh(b * J))[(1, 1)] for b in betas])
    assert np.count_nonzero(np.diff(np.sign(r)) != 0) == 1


@pytest.mark.parametrize("name", NAMES)
def test_indicator_sign(name):
    g = builtin(name)
    bc = critical_beta(g).beta
    assert phase_indicator(g, beta=0.9 * bc) > 0
    assert phase_indicator(g, beta=1.1 * bc) < 0


def test_indicator_beyond_cap():
    g = builtin("hex")
    bc = critical_beta(g).beta
    assert phase_indicator(g, beta=0.8 * bc, cap=1) > 0
    assert phase_indicator(g, beta=1.2 * bc, cap=1) < 0
    assert phase_indicator(g, beta=1.2 * bc, cap=1) == pytest.approx(phase_indicator(g, beta=1.2 * bc), rel=1e-8)


def test_bad_inputs():
    with pytest.raises(ValueError):
        phase_indicator(builtin("square"), beta=0)
    with pytest.raises(ValueError):
        critical_beta(builtin("square"), J=[-1, 1])
