"""Kac-Ward matrices and their determinants on the torus.

For a phase point ``(z, w)`` the transition matrix is

    T[e, e'] = phi(e) * exp(i*alpha(e, e')/2) * x_e   if t(e) = o(e'), e' != reverse(e)

and ``P(z, w) = det(I - T)``.  Everything that does not depend on the phase
is precomputed once in :class:`KacWardOperator`, so grids of phase points
reduce to a row scaling and a batched determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from ._parallel import map_chunks
from .errors import SignAmbiguous
from .homology import DEFAULT_CAP, cycle_space_dim, homology_table
from .toric_graph import ToricGraph, as_weights, enlarge, validate

HALF_PERIODS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

# (z, w) -> sign of Z_10, Z_01, Z_11 in the square root of P(z, w).
_SIGNS = {(z, w): (-z, -w, -z * w) for z, w in HALF_PERIODS}


def transition_pattern(g: ToricGraph) -> np.ndarray:
    """Phase-free part exp(i*alpha/2) of T, zero off the non-backtracking adjacency."""
    cached = g.__dict__.get("_kw_pattern")
    if cached is not None:
        return cached
    n = g.n_oriented
    pattern = np.zeros((n, n), dtype=complex)
    out_edges = g.out_edges
    for e in range(n):
        for e2 in out_edges[g.terminus[e]]:
            if e2 != e ^ 1:
                pattern[e, e2] = np.exp(0.5j * g.angle(e, e2))
    pattern.setflags(write=False)
    g.__dict__["_kw_pattern"] = pattern
    return pattern


@dataclass(frozen=True, eq=False)
class KacWardMatrix:
    matrix: np.ndarray
    z: complex
    w: complex
    x: np.ndarray


@dataclass(frozen=True)
class SpectralValue:
    value: complex
    z: complex
    w: complex
    condition: float

    @property
    def real(self) -> float:
        return self.value.real


class KacWardOperator:
    """Kac-Ward determinants of one weighted toric graph at many phase points."""

    def __init__(self, g: ToricGraph, x):
        validate(g)
        self.graph = g
        self.x = as_weights(g, x)
        xe = np.repeat(self.x, 2)
        self._base = transition_pattern(g) * xe[:, None]
        self._disp = g.displacement

    @property
    def dim(self) -> int:
        return self._base.shape[0]

    def phases(self, z, w) -> np.ndarray:
        """Phases of every oriented edge; broadcasts over arrays of z and w."""
        z = np.asarray(z, dtype=complex)[..., None]
        w = np.asarray(w, dtype=complex)[..., None]
        return z ** self._disp[:, 0] * w ** self._disp[:, 1]

    def matrix(self, z, w) -> np.ndarray:
        return np.eye(self.dim) - self.phases(z, w)[..., :, None] * self._base

    def det(self, z, w) -> np.ndarray:
        """det(I - T) at one point or at arrays of broadcast-compatible points."""
        z, w = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
        shape = z.shape
        zf, wf = z.reshape(-1), w.reshape(-1)
        # bound the stacked matrices to ~64 MiB per chunk
        chunk = max(1, (1 << 22) // (self.dim * self.dim))

        def work(sl):
            return np.linalg.det(self.matrix(zf[sl], wf[sl]))

        out = map_chunks(work, len(zf), chunk)
        return out.reshape(shape)

    def det_with_phases(self, phi) -> complex:
        """Determinant for an arbitrary per-oriented-edge phase vector."""
        phi = np.asarray(phi, dtype=complex)
        return complex(np.linalg.det(np.eye(self.dim) - phi[:, None] * self._base))

    def det_real(self, z, w) -> np.ndarray:
        """Real part of the determinant, for phase points on the unit torus."""
        return self.det(z, w).real


def build(g: ToricGraph, x, z: complex, w: complex) -> KacWardMatrix:
    op = KacWardOperator(g, x)
    return KacWardMatrix(op.matrix(z, w), complex(z), complex(w), op.x)


def determinant(m: KacWardMatrix) -> SpectralValue:
    """Determinant through an LU factorization with partial pivoting."""
    lu, piv = scipy.linalg.lu_factor(m.matrix, check_finite=True)
    diag = np.diag(lu)
    swaps = np.count_nonzero(piv != np.arange(len(piv)))
    value = complex(np.prod(diag)) * (-1) ** swaps
    mags = np.abs(diag)
    cond = float(mags.max() / mags.min()) if mags.min() > 0 else math.inf
    return SpectralValue(value, m.z, m.w, cond)


def kac_ward_det(g: ToricGraph, x, z: complex = 1, w: complex = 1) -> complex:
    return complex(KacWardOperator(g, x).det(z, w))


def scale(x) -> float:
    """Magnitude bound prod(1 + x_e)**2 for the half-period determinants."""
    return float(np.prod(1 + np.asarray(x, dtype=float)) ** 2)


# ----------------------------------------------------------------------
# signed square roots at the half periods


def roots_from_table(table) -> dict[tuple[int, int], float]:
    """Signed roots Z00 + s10*Z10 + s01*Z01 + s11*Z11 at the four half periods."""
    out = {}
    for point, (s10, s01, s11) in _SIGNS.items():
        out[point] = table.z00 + s10 * table.z10 + s01 * table.z01 + s11 * table.z11
    return out


def half_period_roots(
    g: ToricGraph, x, cap: int = DEFAULT_CAP, steps: int = 64, method: str = "auto"
) -> dict[tuple[int, int], float]:
    """The four square roots of P at (+-1, +-1) with constant coefficient +1.

    ``method`` is ``"oracle"`` (signed homology sums), ``"tracking"``
    (continuation along t*x) or ``"auto"`` (oracle when the cycle space fits
    under ``cap``).
    """
    x = as_weights(g, x)
    if method == "auto":
        method = "oracle" if cycle_space_dim(g) <= cap else "tracking"
    if method == "oracle":
        return roots_from_table(homology_table(g, x, cap=cap))
    if method != "tracking":
        raise ValueError(f"unknown method {method!r}")
    return _tracked_roots(g, x, steps)


def _tracked_roots(g: ToricGraph, x: np.ndarray, steps: int) -> dict[tuple[int, int], float]:
    ts = np.linspace(0.0, 1.0, steps + 1)
    zs = np.array([p[0] for p in HALF_PERIODS], dtype=complex)
    ws = np.array([p[1] for p in HALF_PERIODS], dtype=complex)
    values = np.empty((len(ts), 4))
    for i, t in enumerate(ts):
        values[i] = KacWardOperator(g, t * x).det_real(zs, ws)
    tol = 1e-9 * scale(x)
    out = {}
    for k, point in enumerate(HALF_PERIODS):
        p = values[:, k]
        if point != (1, 1):
            if (p[1:] <= tol).any():
                raise SignAmbiguous(f"P{point} approaches zero along the homotopy")
            out[point] = math.sqrt(p[-1])
            continue
        # r11 changes sign wherever P touches zero strictly inside (0, 1)
        sign = 1.0
        last = len(ts) - 1
        for i in range(1, last + 1):
            if p[i] <= p[i - 1] and (i == last or p[i] <= p[i + 1]):
                hi = ts[min(i + 1, last)]
                if _touches_zero(g, x, ts[i - 1], hi, tol):
                    sign = -sign
        out[point] = sign * math.sqrt(max(p[-1], 0.0))
    return out


def _touches_zero(g, x, lo, hi, tol) -> bool:
    res = minimize_scalar(
        lambda t: KacWardOperator(g, t * x).det_real(1, 1),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return res.fun <= tol and res.x < 1 - 1e-9


# ----------------------------------------------------------------------
# scans and identities


@dataclass(frozen=True)
class PositivityReport:
    minimum: float
    argmin: tuple[float, float]
    violations: int
    scale: float
    grid_n: int
    offset: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


def phase_grid(n: int, offset: float = 0.0) -> np.ndarray:
    """Angles 2*pi*(j + offset)/n for j in range(n)."""
    return 2 * np.pi * (np.arange(n) + offset) / n


def positivity_scan(g: ToricGraph, x, grid_n: int, offset: float = 0.0) -> PositivityReport:
    """Evaluate P on a grid_n x grid_n grid of the unit torus."""
    if grid_n < 4:
        raise ValueError("grid_n must be at least 4")
    op = KacWardOperator(g, x)
    ang = phase_grid(grid_n, offset)
    th, et = np.meshgrid(ang, ang, indexing="ij")
    vals = op.det_real(np.exp(1j * th), np.exp(1j * et))
    s = scale(op.x)
    idx = np.unravel_index(np.argmin(vals), vals.shape)
    return PositivityReport(
        minimum=float(vals[idx]),
        argmin=(float(ang[idx[0]]), float(ang[idx[1]])),
        violations=int(np.count_nonzero(vals < -1e-9 * s)),
        scale=s,
        grid_n=grid_n,
        offset=offset,
    )


def enlargement_product_check(g: ToricGraph, x, n: int, m: int, z: complex, w: complex) -> float:
    """Relative gap between P(G_nm) at (z, w) and the product over n-th/m-th roots."""
    x = as_weights(g, x)
    big = enlarge(g, n, m)
    lhs = complex(KacWardOperator(big, np.tile(x, n * m)).det(z, w))
    us = complex(z) ** (1 / n) * np.exp(2j * np.pi * np.arange(n) / n)
    vs = complex(w) ** (1 / m) * np.exp(2j * np.pi * np.arange(m) / m)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    rhs = complex(np.prod(KacWardOperator(g, x).det(uu, vv)))
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
