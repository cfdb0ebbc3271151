import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kacward.errors import TooLarge
from kacward.examples import NAMES, builtin
from kacward.homology import homology_table, partition_function
from kacward.kac_ward import (
    HALF_PERIODS,
    KacWardOperator,
    build,
    determinant,
    enlargement_product_check,
    half_period_roots,
    kac_ward_det,
    positivity_scan,
    roots_from_table,
    scale,
)
from kacward.toric_graph import enlarge

SQ_CRIT = math.sqrt(2) - 1


def square_det(x, z, w):
    # closed form for the one-vertex square domain with equal weights
    return (1 + x * x) ** 2 - x * (1 - x * x) * (z + 1 / z + w + 1 / w)


class TestMatrix:
    def test_zero_weights_identity(self):
        m = build(builtin("hex"), 0.0, 1, 1)
        assert np.array_equal(m.matrix, np.eye(6))
        assert determinant(m).value == 1

    def test_sparsity(self, any_builtin, rng):
        g = any_builtin
        x = rng.uniform(0.1, 0.9, g.n_edges)
        z, w = np.exp(1j * rng.uniform(-3, 3, 2))
        M = KacWardOperator(g, x).matrix(z, w)
        T = np.eye(g.n_oriented) - M
        # a loop may follow itself, so only non-loop diagonal entries are 1
        loop = g.origin == g.terminus
        assert np.allclose(np.diag(M)[~loop], 1)
        xe = x[np.arange(g.n_oriented) >> 1]
        for e in range(g.n_oriented):
            for f in range(g.n_oriented):
                allowed = g.terminus[e] == g.origin[f] and f != e ^ 1
                if allowed:
                    assert abs(T[e, f]) == pytest.approx(xe[e])
                else:
                    assert T[e, f] == 0

    @pytest.mark.parametrize("z,w", [(1, 1), (-1, 1), (1j, -1j), (np.exp(0.7j), np.exp(-2.1j))])
    def test_square_closed_form(self, z, w):
        x = 0.3
        got = kac_ward_det(builtin("square"), x, z, w)
        assert got == pytest.approx(square_det(x, z, w), abs=1e-13)

    def test_square_vanishes_at_criticality(self):
        assert abs(kac_ward_det(builtin("square"), SQ_CRIT, 1, 1)) < 1e-14

    def test_condition_reported(self):
        v = determinant(build(builtin("tri"), 0.4, 1, 1))
        assert v.condition >= 1
        assert (v.z, v.w) == (1, 1)


class TestProperties:
    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(NAMES), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi), st.integers(0, 2**31))
    def test_reality_and_conjugation(self, name, a, b, seed):
        g = builtin(name)
        x = np.random.default_rng(seed).uniform(0.01, 0.99, g.n_edges)
        op = KacWardOperator(g, x)
        z, w = np.exp(1j * a), np.exp(1j * b)
        p = complex(op.det(z, w))
        assert abs(p.imag) <= 1e-9 * (1 + abs(p))
        assert abs(p - complex(op.det(z.conjugate(), w.conjugate())).conjugate()) < 1e-10 * (1 + abs(p))

    @settings(max_examples=25, deadline=None)
    @given(st.sampled_from(NAMES), st.floats(-math.pi, math.pi), st.integers(0, 2**31))
    def test_gauge_invariance(self, name, lam, seed):
        g = enlarge(builtin(name), 2, 1)
        r = np.random.default_rng(seed)
        x = r.uniform(0.05, 0.95, g.n_edges)
        z, w = np.exp(1j * r.uniform(-3, 3, 2))
        op = KacWardOperator(g, x)
        phi = op.phases(z, w).copy()
        v = int(r.integers(g.n_vertices))
        l = np.exp(1j * lam)
        phi[g.origin == v] *= l
        phi[g.terminus == v] /= l
        assert abs(op.det_with_phases(phi) - complex(op.det(z, w))) < 1e-10 * (1 + abs(op.det(z, w)))

    def test_half_period_squares(self, any_builtin, rng):
        g = any_builtin
        for _ in range(5):
            x = rng.uniform(0.01, 0.99, g.n_edges)
            roots = roots_from_table(homology_table(g, x))
            op = KacWardOperator(g, x)
            for p in HALF_PERIODS:
                d = float(op.det_real(*p))
                assert d >= -1e-9 * scale(x)
                assert d == pytest.approx(roots[p] ** 2, rel=1e-10, abs=1e-12)

    def test_partition_from_roots(self, any_builtin, rng):
        g = any_builtin
        x = rng.uniform(0.01, 0.99, g.n_edges)
        r = half_period_roots(g, x)
        z = 0.5 * (-r[(1, 1)] + r[(1, -1)] + r[(-1, 1)] + r[(-1, -1)])
        assert z == pytest.approx(partition_function(g, x), rel=1e-12)


class TestRoots:
    def test_square_signs(self):
        below = half_period_roots(builtin("square"), 0.3)
        above = half_period_roots(builtin("square"), 0.6)
        assert below[(1, 1)] > 0 > above[(1, 1)]
        assert min(below[p] for p in HALF_PERIODS if p != (1, 1)) > 0

    @pytest.mark.parametrize("name,x", [("square", 0.2), ("square", 0.7), ("hex", 0.8), ("tri", 0.1), ("tri", 0.5), ("rect21", 0.45)])
    def test_tracking_matches_oracle(self, name, x):
        g = builtin(name)
        a = half_period_roots(g, x, method="oracle")
        b = half_period_roots(g, x, method="tracking")
        for p in HALF_PERIODS:
            assert b[p] == pytest.approx(a[p], rel=1e-8, abs=1e-10)

    def test_tracking_beyond_cap(self):
        g = enlarge(builtin("square"), 2, 2)
        oracle = half_period_roots(g, 0.55, method="oracle")
        with pytest.raises(TooLarge):
            half_period_roots(g, 0.55, cap=3, method="oracle")
        tracked = half_period_roots(g, 0.55, cap=3)
        assert tracked[(1, 1)] == pytest.approx(oracle[(1, 1)], rel=1e-8)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            half_period_roots(builtin("square"), 0.3, method="magic")


class TestEnlargement:
    def test_trivial(self):
        assert enlargement_product_check(builtin("tri"), 0.3, 1, 1, 0.2 + 0.1j, 1j) == 0

    def test_square_22(self):
        assert enlargement_product_check(builtin("square"), 0.3, 2, 2, 1, 1) < 1e-10

    def test_hex_23(self):
        assert enlargement_product_check(builtin("hex"), 0.25, 2, 3, -1, 1) < 1e-10


class TestPositivity:
    def test_subcritical_strictly_positive(self):
        rep = positivity_scan(builtin("square"), 0.3, 32)
        assert rep.ok
        assert rep.minimum > 0

    def test_critical_touches_zero_at_origin(self):
        rep = positivity_scan(builtin("square"), SQ_CRIT, 16)
        assert rep.ok
        assert abs(rep.minimum) < 1e-12
        assert rep.argmin == (0.0, 0.0)

    def test_grid_too_small(self):
        with pytest.raises(ValueError):
            positivity_scan(builtin("square"), 0.3, 2)
