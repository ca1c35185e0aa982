"""Command-line surface: approximate, indicators, convergence, oscillation.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O failure.
All outputs are deterministic for a fixed invocation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from .datasets import TestFunction, halton_points, load_csv, parse_test_function, regular_grid, sample
from .errors import DdmlsError, DuplicatePoint, EmptyNodeSet, ParseError
from .geometry import NodeSet, build_spatial_index
from .harness import (
    DEFAULT_EVAL_HI,
    DEFAULT_EVAL_LO,
    DEFAULT_EVAL_N,
    StudyConfig,
    eval_grid_points,
    format_error_field_csv,
    oscillation_report,
    run_convergence_study,
)
from .kernels import KernelKind, WeightConfig, default_shape_eps, default_truncation
from .mls import MlsConfig, STATUS_INSUFFICIENT, default_cell_size, evaluate_field, solve_point
from .polybasis import BasisSpec
from .smoothness import DdWeightParams, compute_indicators, default_delta


def _parse_levels(text: str) -> tuple[int, ...]:
    try:
        first, last = text.split("..", 1)
        a, b = int(first), int(last)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError(f"empty level range {text!r}")
    return tuple(range(a, b + 1))


def _parse_eval_grid(text: str):
    parts = text.split(",")
    try:
        n = int(parts[0])
        corners = tuple(float(p) for p in parts[1:])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N[,corner coords], got {text!r}") from None
    if len(corners) not in (0, 2, 4):
        raise argparse.ArgumentTypeError("corner spec takes 2 (1-D) or 4 (2-D) coordinates")
    return n, corners


def _parse_kernel(text: str) -> KernelKind:
    try:
        return KernelKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _parse_fn(text: str) -> TestFunction:
    try:
        return parse_test_function(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_node_source(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--grid", type=int, metavar="L", help="regular grid with (2^L+1)^2 nodes on the unit square")
    group.add_argument("--halton", type=int, metavar="N", help="first N Halton points, bases (2, 3)")
    group.add_argument("--nodes", metavar="PATH", help="node CSV with header x,y,f (or x,f)")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--degree", type=int, required=True, help="polynomial degree of the local fit")
    p.add_argument("--kernel", type=_parse_kernel, required=True,
                   help="radial kernel: G, IMQ, M0, M2, M4, W0, W2, W4")
    p.add_argument("--mode", choices=("linear", "dd"), default="linear")
    p.add_argument("--exponent", type=float, default=4.0, help="indicator exponent t (dd mode)")
    p.add_argument("--eps-reg", type=float, default=1e-6, help="indicator regularization (dd mode)")
    p.add_argument("--shape-eps", type=float, default=None,
                   help="kernel shape parameter (default: 0.5*floor(sqrt(N)/2))")
    p.add_argument("--delta", type=float, default=None,
                   help="indicator ball radius (default: sqrt(2)/floor(sqrt(N)/2))")
    p.add_argument("--trunc", type=float, default=None,
                   help="weight truncation threshold (default: 1e-10 for global kernels, 0 for Wendland)")
    p.add_argument("--auto-degree", action="store_true",
                   help="retry starved queries with degree-1, ..., 0 instead of failing")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddmls",
        description="Moving least-squares scattered-data approximation with "
                    "discontinuity-aware weighting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approximate", help="evaluate the approximant on a grid, emit an error-field CSV")
    _add_node_source(p)
    p.add_argument("--fn", type=_parse_fn, default=None,
                   help="test surface: franke, glevin, zcircle, pfranke:<const>")
    _add_solver_flags(p)
    p.add_argument("--eval-grid", type=_parse_eval_grid, default=None, metavar="NX[,corners]",
                   help=f"evaluation grid: per-axis count plus optional lo/hi corner coords "
                        f"(default {DEFAULT_EVAL_N} on [0.025,0.975]^2)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.set_defaults(runner=cmd_approximate)

    p = sub.add_parser("indicators", help="dump per-node smoothness indicators as CSV")
    _add_node_source(p)
    p.add_argument("--fn", type=_parse_fn, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(runner=cmd_indicators)

    p = sub.add_parser("convergence", help="run a refinement study, emit a rate table")
    p.add_argument("--levels", type=_parse_levels, required=True, metavar="A..B")
    p.add_argument("--source", choices=("grid", "halton"), required=True)
    p.add_argument("--fn", type=_parse_fn, required=True)
    _add_solver_flags(p)
    p.add_argument("--eval-grid", type=_parse_eval_grid, default=None, metavar="NX[,corners]")
    p.add_argument("--json", action="store_true", help="emit JSON rows instead of CSV")
    p.add_argument("--out", default=None)
    p.set_defaults(runner=cmd_convergence)

    p = sub.add_parser("oscillation", help="report overshoot and high-error band width")
    _add_node_source(p)
    p.add_argument("--fn", type=_parse_fn, required=True)
    _add_solver_flags(p)
    p.add_argument("--eval-grid", type=_parse_eval_grid, default=None, metavar="NX[,corners]")
    p.add_argument("--out", default=None)
    p.set_defaults(runner=cmd_oscillation)

    return parser


class _Usage(Exception):
    pass


def _load_nodes(args) -> NodeSet:
    if args.nodes is not None:
        return load_csv(args.nodes)
    if args.fn is None:
        raise _Usage("--fn is required with --grid/--halton node sources")
    if args.grid is not None:
        if args.grid < 1:
            raise _Usage("--grid level must be >= 1")
        return sample(args.fn, regular_grid(args.grid))
    if args.halton < 1:
        raise _Usage("--halton count must be >= 1")
    return sample(args.fn, halton_points(args.halton))


def _make_config(args, nodes: NodeSet) -> MlsConfig:
    n = len(nodes)
    eps = args.shape_eps if args.shape_eps is not None else default_shape_eps(n)
    trunc = args.trunc if args.trunc is not None else default_truncation(args.kernel)
    weights = WeightConfig(args.kernel, eps, trunc)
    basis = BasisSpec(nodes.dim, args.degree)
    dd = DdWeightParams(args.eps_reg, args.exponent) if args.mode == "dd" else None
    return MlsConfig(basis, weights, args.mode, dd)


def _eval_queries(args, dim: int) -> np.ndarray:
    if args.eval_grid is None:
        n, corners = DEFAULT_EVAL_N, ()
    else:
        n, corners = args.eval_grid
    if corners:
        if len(corners) != 2 * dim:
            raise _Usage(f"--eval-grid corner spec needs {2 * dim} coordinates for {dim}-D nodes")
        lo, hi = corners[:dim], corners[dim:]
    else:
        lo, hi = DEFAULT_EVAL_LO[:dim], DEFAULT_EVAL_HI[:dim]
    return eval_grid_points(lo, hi, n)


def _field_for(args, nodes: NodeSet):
    if args.mode != "dd":
        return None
    delta = args.delta if args.delta is not None else default_delta(len(nodes))
    return compute_indicators(nodes, delta)


def _evaluate(args, nodes, cfg, field, queries):
    """Batch evaluation; optional per-query degree fallback, else fail fast."""
    values, statuses = evaluate_field(nodes, cfg, field, queries)
    retry = [i for i, s in enumerate(statuses) if s == STATUS_INSUFFICIENT] if args.auto_degree else []
    if retry:
        index = build_spatial_index(nodes, default_cell_size(nodes, cfg))
        for i in retry:
            for d in range(cfg.basis.degree - 1, -1, -1):
                low = replace(cfg, basis=BasisSpec(nodes.dim, d))
                try:
                    values[i] = solve_point(nodes, index, low, field, queries[i]).value
                    statuses[i] = None
                    break
                except DdmlsError:
                    continue
    for i, status in enumerate(statuses):
        if status is not None:
            raise DdmlsError(f"query {tuple(queries[i])}: {status}")
    return values


def cmd_approximate(args) -> str:
    nodes = _load_nodes(args)
    cfg = _make_config(args, nodes)
    field = _field_for(args, nodes)
    queries = _eval_queries(args, nodes.dim)
    values = _evaluate(args, nodes, cfg, field, queries)
    truth = None
    if args.fn is not None and nodes.dim == 2:
        truth = args.fn.evaluate(queries[:, 0], queries[:, 1])
    return format_error_field_csv(queries, values, truth)


def cmd_indicators(args) -> str:
    nodes = _load_nodes(args)
    delta = args.delta if args.delta is not None else default_delta(len(nodes))
    field = compute_indicators(nodes, delta)
    header = "i,x,y,f,Ni,I" if nodes.dim == 2 else "i,x,f,Ni,I"
    lines = [header]
    for i in range(len(nodes)):
        coords = ",".join(f"{c:.17g}" for c in nodes.points[i])
        lines.append(
            f"{i},{coords},{nodes.values[i]:.17g},{field.neighbor_counts[i]},{field.indicators[i]:.17g}"
        )
    return "\n".join(lines) + "\n"


def cmd_convergence(args) -> str:
    if args.auto_degree:
        raise _Usage("--auto-degree is not available in convergence studies (rates must not mix degrees)")
    weights = WeightConfig(args.kernel, 1.0, args.trunc if args.trunc is not None
                           else default_truncation(args.kernel))  # shape_eps replaced per level
    dd = DdWeightParams(args.eps_reg, args.exponent) if args.mode == "dd" else None
    template = MlsConfig(BasisSpec(2, args.degree), weights, args.mode, dd)
    if args.eval_grid is None:
        eval_n, corners = DEFAULT_EVAL_N, ()
    else:
        eval_n, corners = args.eval_grid
        if corners and len(corners) != 4:
            raise _Usage("--eval-grid corner spec needs 4 coordinates here")
    lo = corners[:2] if corners else DEFAULT_EVAL_LO
    hi = corners[2:] if corners else DEFAULT_EVAL_HI
    cfg = StudyConfig(
        levels=args.levels,
        source=args.source,
        fn=args.fn,
        mls=template,
        eval_lo=tuple(lo),
        eval_hi=tuple(hi),
        eval_n=eval_n,
        shape_eps=args.shape_eps,
        delta=args.delta,
    )
    table = run_convergence_study(cfg)
    return table.to_json() if args.json else table.to_csv()


def cmd_oscillation(args) -> str:
    nodes = _load_nodes(args)
    cfg = _make_config(args, nodes)
    if args.eval_grid is None:
        eval_n, corners = DEFAULT_EVAL_N, ()
    else:
        eval_n, corners = args.eval_grid
    lo = corners[:2] if corners else DEFAULT_EVAL_LO
    hi = corners[2:] if corners else DEFAULT_EVAL_HI
    report = oscillation_report(cfg, args.fn, nodes, tuple(lo), tuple(hi), eval_n, args.delta)
    return f"max_overshoot,band_width\n{report.max_overshoot:.17g},{report.band_width:.17g}\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.runner(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, DuplicatePoint, EmptyNodeSet) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except (DdmlsError, ValueError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    try:
        if args.out is None:
            sys.stdout.write(text)
        else:
            with open(args.out, "w", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
