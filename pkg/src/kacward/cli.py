"""Command-line front end.

Graph arguments are either a path to a graph file or ``example:<name>``
for a built-in domain.  Output is line-oriented ``key=value`` text.

Exit status: 0 success, 1 usage or parse error, 2 invalid graph,
3 failed identity check.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import graphfile
from .critical import critical_beta
from .errors import GraphError, KacWardError, ParseError, TooLarge
from .examples import NAMES, builtin
from .fan_wu import (
    build_fan_wu,
    dual_weights,
    duality_check,
    kasteleyn_orientation,
    matching_oracle,
    kasteleyn_determinant,
    scaled_determinant,
    signed_duality_check,
)
from .free_energy import free_energy
from .homology import homology_table, partition_function
from .kac_ward import HALF_PERIODS, KacWardOperator, enlargement_product_check, phase_grid
from .toric_graph import dual, validate, with_weights

TOL = 1e-10


def _fmt(v: float) -> str:
    return repr(float(v))


def load_graph(source: str):
    if source.startswith("example:"):
        return builtin(source[len("example:"):])
    return graphfile.load(source)


def _weights(g, beta):
    if any(e.coupling is not None for e in g.edges) and beta is None:
        beta = 1.0
    return g.weights(beta)


def cmd_betac(args, out):
    g = load_graph(args.graph)
    validate(g)
    cp = critical_beta(g, tol=args.tol, method=args.method)
    print(f"beta_c={_fmt(cp.beta)} residual={cp.residual:.3e} method={cp.method}", file=out)
    return 0


def cmd_spectral(args, out):
    g = load_graph(args.graph)
    op = KacWardOperator(g, _weights(g, args.beta))
    if args.z_exp is not None or args.w_exp is not None:
        thetas = np.array([args.z_exp or 0.0])
        etas = np.array([args.w_exp or 0.0])
    else:
        thetas = etas = phase_grid(args.grid, args.offset)
    th, et = np.meshgrid(thetas, etas, indexing="ij")
    vals = op.det(np.exp(1j * th), np.exp(1j * et))
    for a, b, p in zip(th.ravel(), et.ravel(), vals.ravel()):
        print(f"{a:.12f} {b:.12f} {p.real:.15e}", file=out)
    return 0


def cmd_freeenergy(args, out):
    g = load_graph(args.graph)
    x = _weights(g, args.beta)
    res = free_energy(g, x, args.grid)
    print(f"log_z_x={_fmt(res.value)}", file=out)
    print(f"error={res.error:.3e}", file=out)
    print(f"grid={res.grid_n}", file=out)
    print(f"singular={str(res.singular).lower()}", file=out)
    if all(e.coupling is not None for e in g.edges):
        beta = 1.0 if args.beta is None else args.beta
        J = g.couplings()
        ising = res.value + float(np.sum(np.log(np.cosh(beta * J)))) + g.n_vertices * math.log(2)
        print(f"ising={_fmt(ising)}", file=out)
    return 0


def run_checks(g, x, seed: int = 0, points: int = 25):
    """Identity suite: yields (name, residual or None when skipped)."""
    rng = np.random.default_rng(seed)
    op = KacWardOperator(g, x)
    try:
        table = homology_table(g, x)
    except TooLarge:
        table = None
    if table is not None:
        from .kac_ward import roots_from_table

        roots = roots_from_table(table)
        worst = 0.0
        for p in HALF_PERIODS:
            d = float(op.det_real(*p))
            worst = max(worst, abs(d - roots[p] ** 2) / max(1.0, roots[p] ** 2))
        yield "half_period_squares", worst
        z = 0.5 * (-roots[(1, 1)] + roots[(1, -1)] + roots[(-1, 1)] + roots[(-1, -1)])
        total = partition_function(g, x)
        yield "partition_from_roots", abs(z - total) / max(1.0, total)
    else:
        yield "half_period_squares", None
        yield "partition_from_roots", None
    phases = np.exp(1j * rng.uniform(-np.pi, np.pi, size=(points, 2)))
    c = build_fan_wu(g, x)
    omega = kasteleyn_orientation(c)
    worst = 0.0
    for z, w in phases:
        kw = abs(complex(op.det(z, w)))
        worst = max(worst, abs(abs(scaled_determinant(c, omega, z, w)) - kw) / max(1.0, kw))
    yield "kasteleyn_correspondence", worst
    if c.n_black <= 16:
        z, w = phases[0]
        dk = kasteleyn_determinant(c, omega, z, w)
        yield "matching_expansion", abs(matching_oracle(c, omega, z, w) - dk) / max(1.0, abs(dk))
    else:
        yield "matching_expansion", None
    gd = dual(g)
    yield "duality", max(duality_check(g, x, z, w, g_dual=gd) for z, w in phases[:5])
    try:
        yield "signed_duality", max(signed_duality_check(g, x, g_dual=gd).values())
    except TooLarge:
        yield "signed_duality", None
    z, w = phases[1]
    yield "enlargement_product", max(
        enlargement_product_check(g, x, 2, 2, 1, 1),
        enlargement_product_check(g, x, 2, 1, z, w),
    )


def cmd_verify(args, out):
    g = load_graph(args.graph)
    validate(g)
    x = _weights(g, args.beta)
    try:
        table = homology_table(g, x)
        for key, val in table.as_dict().items():
            print(f"{key}={_fmt(val)}", file=out)
        print(f"k={table.k}", file=out)
    except TooLarge:
        print("table=skipped", file=out)
    failed = False
    for name, residual in run_checks(g, x, seed=args.seed):
        if residual is None:
            print(f"check={name} status=skipped", file=out)
            continue
        ok = residual < args.tol
        failed |= not ok
        print(f"check={name} residual={residual:.3e} status={'pass' if ok else 'fail'}", file=out)
    return 3 if failed else 0


def cmd_dualize(args, out):
    g = load_graph(args.graph)
    x = _weights(g, args.beta)
    gd = with_weights(dual(g), dual_weights(x))
    out.write(graphfile.dumps(gd))
    return 0


def cmd_example(args, out):
    g = builtin(args.name)
    if args.emit:
        out.write(graphfile.dumps(g))
        return 0
    rep = validate(g)
    print(f"name={args.name} vertices={g.n_vertices} edges={g.n_edges} faces={rep.n_faces}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kacward", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("betac", help="critical inverse temperature")
    s.add_argument("graph")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--method", choices=("auto", "oracle", "determinant"), default="auto")
    s.set_defaults(func=cmd_betac)

    s = sub.add_parser("spectral", help="Kac-Ward determinant on the unit torus")
    s.add_argument("graph")
    s.add_argument("--beta", type=float, default=None)
    s.add_argument("--grid", type=int, default=16)
    s.add_argument("--offset", type=float, default=0.0, help="grid shift in units of the spacing")
    s.add_argument("--z-exp", type=float, default=None, help="single point: z = exp(i*a)")
    s.add_argument("--w-exp", type=float, default=None, help="single point: w = exp(i*b)")
    s.set_defaults(func=cmd_spectral)

    s = sub.add_parser("freeenergy", help="free energy per fundamental domain")
    s.add_argument("graph")
    s.add_argument("--beta", type=float, default=None)
    s.add_argument("--grid", type=int, default=64)
    s.set_defaults(func=cmd_freeenergy)

    s = sub.add_parser("verify", help="run the identity suite")
    s.add_argument("graph")
    s.add_argument("--beta", type=float, default=None)
    s.add_argument("--tol", type=float, default=TOL)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("dualize", help="emit the dual graph with dual weights")
    s.add_argument("graph")
    s.add_argument("--beta", type=float, default=None)
    s.set_defaults(func=cmd_dualize)

    s = sub.add_parser("example", help="built-in graphs")
    s.add_argument("name", help=", ".join(NAMES))
    s.add_argument("--emit", action="store_true", help="print the graph file")
    s.set_defaults(func=cmd_example)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", 16) is not None and getattr(args, "grid", 16) < 1:
        parser.error("--grid must be positive")
    try:
        return args.func(args, out)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GraphError as exc:
        print(f"invalid graph: {exc}", file=sys.stderr)
        return 2
    except (KacWardError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
