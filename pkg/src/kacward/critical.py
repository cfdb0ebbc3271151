"""Critical inverse temperature as the zero of the (1,1) Kac-Ward root."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import BracketFailure
from .homology import DEFAULT_CAP, cycle_space_dim, indicator
from .kac_ward import KacWardOperator, half_period_roots, scale
from .toric_graph import ToricGraph

BRACKET = (1e-6, 1e3)


@dataclass(frozen=True)
class CriticalPoint:
    beta: float
    residual: float
    method: str
    bracket: tuple[float, float]


def _couplings(g: ToricGraph, J) -> np.ndarray:
    J = g.couplings() if J is None else np.broadcast_to(np.asarray(J, dtype=float), (g.n_edges,))
    if (J <= 0).any():
        raise ValueError("couplings must be positive")
    return np.asarray(J, dtype=float)


def phase_indicator(g: ToricGraph, J=None, beta: float = 1.0, cap: int = DEFAULT_CAP) -> float:
    """Z_E0 - Z_E1 at x = tanh(beta*J); positive means disordered.

    Beyond the enumeration cap the signed root of P(1, 1) obtained by
    continuation is returned instead; it has the same sign.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    x = np.tanh(beta * _couplings(g, J))
    if cycle_space_dim(g) <= cap:
        return indicator(g, x, cap=cap)
    return half_period_roots(g, x, method="tracking")[(1, 1)]


def critical_identity_residual(g: ToricGraph, J=None, beta: float = 1.0, cap: int = DEFAULT_CAP) -> float:
    """Z_E0 - Z_E1 from the enumeration oracle; zero exactly at beta_c."""
    return indicator(g, np.tanh(beta * _couplings(g, J)), cap=cap)


def critical_beta(
    g: ToricGraph,
    J=None,
    tol: float = 1e-10,
    cap: int = DEFAULT_CAP,
    method: str = "auto",
    bracket: tuple[float, float] = BRACKET,
    grid: int = 200,
) -> CriticalPoint:
    """Solve Z_E0(x_beta) = Z_E1(x_beta) for the unique beta in (0, inf).

    ``method`` is ``"oracle"`` (sign change of the enumerated indicator),
    ``"determinant"`` (minimum of P(1, 1) along beta) or ``"auto"``.
    """
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    J = _couplings(g, J)
    if method == "auto":
        method = "oracle" if cycle_space_dim(g) <= cap else "determinant"
    logb = np.linspace(math.log(bracket[0]), math.log(bracket[1]), grid)
    if method == "oracle":
        return _oracle_root(g, J, tol, cap, logb)
    if method == "determinant":
        return _determinant_root(g, J, tol, logb)
    raise ValueError(f"unknown method {method!r}")


def _oracle_root(g, J, tol, cap, logb) -> CriticalPoint:
    def f(beta):
        return indicator(g, np.tanh(beta * J), cap=cap)

    betas = np.exp(logb)
    vals = np.array([f(b) for b in betas])
    change = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))
    if len(change) == 0:
        raise BracketFailure("the phase indicator keeps one sign on the bracket")
    i = change[0]
    lo, hi = float(betas[i]), float(betas[i + 1])
    if vals[i] == 0:
        beta = lo
    elif vals[i + 1] == 0:
        beta = hi
    else:
        beta = brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=400)
    return CriticalPoint(float(beta), abs(f(beta)), "oracle-bisection", (lo, hi))


def _p11(g, J, beta) -> float:
    return float(KacWardOperator(g, np.tanh(beta * J)).det_real(1, 1))


def _determinant_root(g, J, tol, logb) -> CriticalPoint:
    vals = np.array([_p11(g, J, math.exp(t)) for t in logb])
    i = int(np.argmin(vals))
    lo, hi = logb[max(i - 1, 0)], logb[min(i + 1, len(logb) - 1)]
    if i == 0 or i == len(logb) - 1:
        raise BracketFailure("P(1,1) has no interior minimum on the bracket")
    res = minimize_scalar(
        lambda t: math.sqrt(max(_p11(g, J, math.exp(t)), 0.0)),
        bracket=(lo, logb[i], hi),
        method="golden",
        options={"xtol": 1e-12, "maxiter": 400},
    )
    beta = math.exp(res.x)
    # r11 = +sqrt(P) below beta_c and -sqrt(P) above; refine with a local cubic through signed samples
    for rel in (1e-3, 1e-4):
        beta = _signed_refine(g, J, beta, rel * beta)
    residual = math.sqrt(max(_p11(g, J, beta), 0.0))
    if abs(beta - math.exp(res.x)) > 1e-6 * beta:
        beta = math.exp(res.x)
        residual = math.sqrt(max(_p11(g, J, beta), 0.0))
    return CriticalPoint(beta, residual, "determinant-minimization", (math.exp(lo), math.exp(hi)))


def _signed_refine(g, J, center, h) -> float:
    offsets = np.array([-2.0, -1.0, 1.0, 2.0])
    signed = np.array([
        -np.sign(o) * math.sqrt(max(_p11(g, J, center + o * h), 0.0)) for o in offsets
    ])
    coeffs = np.polyfit(offsets, signed, 3)
    roots = np.roots(coeffs)
    roots = roots[np.abs(roots.imag) < 1e-9].real
    roots = roots[np.abs(roots) <= 2.0]
    if len(roots) == 0:
        return center
    return float(center + h * roots[np.argmin(np.abs(roots))])


def determinant_residual(g: ToricGraph, J, beta: float) -> float:
    """P(1, 1) at beta relative to the half-period magnitude bound."""
    x = np.tanh(beta * _couplings(g, J))
    return abs(float(KacWardOperator(g, x).det_real(1, 1))) / scale(x)
