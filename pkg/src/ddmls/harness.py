"""Error metrics, convergence studies and oscillation/smearing diagnostics.

A convergence study rebuilds the node set per refinement level, recomputes the
level-dependent parameters (shape parameter, indicator radius), evaluates the
approximant on a fixed grid and reports the max and root-mean-square errors
together with their observed orders against the fill distance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .datasets import TestFunction, halton_points, regular_grid, sample
from .errors import DdmlsError, EmptyErrors, NonPositiveInput
from .geometry import NodeSet, fill_distance_estimate
from .kernels import default_shape_eps
from .mls import EXCEPTION_OF_STATUS, MlsConfig, evaluate_field
from .smoothness import SmoothnessField, compute_indicators, default_delta

DEFAULT_EVAL_LO = (0.025, 0.025)
DEFAULT_EVAL_HI = (0.975, 0.975)
DEFAULT_EVAL_N = 120


def error_metrics(errors) -> tuple[float, float]:
    """(max error, root-mean-square error) of a nonempty error vector."""
    e = np.atleast_1d(np.asarray(errors, dtype=float))
    if e.size == 0:
        raise EmptyErrors("error vector is empty")
    return float(e.max()), float(np.sqrt((e * e).mean()))


def convergence_rate(e_prev: float, e_cur: float, h_prev: float, h_cur: float) -> float:
    """Observed order log(e_prev/e_cur) / log(h_prev/h_cur)."""
    for name, v in (("e_prev", e_prev), ("e_cur", e_cur), ("h_prev", h_prev), ("h_cur", h_cur)):
        if not (v > 0):
            raise NonPositiveInput(f"{name} must be > 0, got {v}")
    if not h_prev > h_cur:
        raise NonPositiveInput(f"need h_prev > h_cur, got {h_prev} <= {h_cur}")
    return math.log(e_prev / e_cur) / math.log(h_prev / h_cur)


def eval_grid_points(lo=DEFAULT_EVAL_LO, hi=DEFAULT_EVAL_HI, n: int = DEFAULT_EVAL_N) -> np.ndarray:
    """Regular n-per-axis evaluation grid over the box [lo, hi]."""
    if n < 2:
        raise ValueError(f"per-axis count must be >= 2, got {n}")
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    axes = [np.linspace(lo[k], hi[k], n) for k in range(lo.shape[0])]
    if lo.shape[0] == 1:
        return axes[0][:, None]
    gx, gy = np.meshgrid(axes[0], axes[1], indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class StudyRow:
    level: int
    n_nodes: int
    h: float
    mae: float
    rate_inf: float | None
    rmse: float
    rate_2: float | None


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple[StudyRow, ...]

    def to_csv(self) -> str:
        lines = ["l,N,h,MAE,rate_inf,RMSE,rate_2"]
        for r in self.rows:
            ri = "" if r.rate_inf is None else f"{r.rate_inf:.17g}"
            r2 = "" if r.rate_2 is None else f"{r.rate_2:.17g}"
            lines.append(f"{r.level},{r.n_nodes},{r.h:.17g},{r.mae:.17g},{ri},{r.rmse:.17g},{r2}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = [
            {
                "l": r.level,
                "N": r.n_nodes,
                "h": r.h,
                "MAE": r.mae,
                "rate_inf": r.rate_inf,
                "RMSE": r.rmse,
                "rate_2": r.rate_2,
            }
            for r in self.rows
        ]
        return json.dumps(rows, indent=2) + "\n"


@dataclass(frozen=True)
class StudyConfig:
    """Convergence-study setup.

    ``mls`` is a template: its kernel kind, truncation, degree, mode and
    solver tolerance are used as given, while the shape parameter (and the
    indicator radius in data-dependent mode) are recomputed per level from
    the node count, unless pinned via ``shape_eps``/``delta``.
    """

    levels: tuple[int, ...]
    source: str  # "grid" | "halton"
    fn: TestFunction
    mls: MlsConfig
    eval_lo: tuple[float, float] = DEFAULT_EVAL_LO
    eval_hi: tuple[float, float] = DEFAULT_EVAL_HI
    eval_n: int = DEFAULT_EVAL_N
    shape_eps: float | None = None
    delta: float | None = None
    fill_resolution: int = 512

    def __post_init__(self):
        levels = tuple(int(l) for l in self.levels)
        if not levels or any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError(f"levels must be nonempty and strictly increasing, got {levels}")
        if self.source not in ("grid", "halton"):
            raise ValueError(f"source must be 'grid' or 'halton', got {self.source!r}")
        if self.eval_n < 2:
            raise ValueError(f"eval_n must be >= 2, got {self.eval_n}")
        object.__setattr__(self, "levels", levels)


def level_nodes(source: str, level: int, fn: TestFunction) -> NodeSet:
    """Sampled node set of one refinement level: (2^l + 1)^2 nodes."""
    side = 2**level + 1
    nodes = regular_grid(level) if source == "grid" else halton_points(side * side)
    return sample(fn, nodes)


def prepare_level_config(
    cfg: StudyConfig, nodes: NodeSet
) -> tuple[MlsConfig, SmoothnessField | None]:
    """Per-level solver config and (in data-dependent mode) indicator field."""
    n = len(nodes)
    eps = cfg.shape_eps if cfg.shape_eps is not None else default_shape_eps(n)
    weights = replace(cfg.mls.weights, shape_eps=eps)
    mls_cfg = replace(cfg.mls, weights=weights)
    field = None
    if mls_cfg.mode == "dd":
        delta = cfg.delta if cfg.delta is not None else default_delta(n)
        field = compute_indicators(nodes, delta)
    return mls_cfg, field


def evaluate_or_raise(nodes, mls_cfg, field, queries, context: str = "") -> np.ndarray:
    """Batch evaluation that aborts on the first failed query."""
    values, statuses = evaluate_field(nodes, mls_cfg, field, queries)
    for q, status in zip(np.atleast_2d(queries), statuses):
        if status is not None:
            exc = EXCEPTION_OF_STATUS.get(status, DdmlsError)
            raise exc(f"{context}query {tuple(q)}: {status}")
    return values


def run_convergence_study(cfg: StudyConfig) -> ConvergenceTable:
    """Errors and observed orders across the configured refinement levels."""
    queries = eval_grid_points(cfg.eval_lo, cfg.eval_hi, cfg.eval_n)
    rows: list[StudyRow] = []
    prev: StudyRow | None = None
    for level in cfg.levels:
        nodes = level_nodes(cfg.source, level, cfg.fn)
        mls_cfg, field = prepare_level_config(cfg, nodes)
        values = evaluate_or_raise(nodes, mls_cfg, field, queries, context=f"level {level}, ")
        truth = cfg.fn.evaluate(queries[:, 0], queries[:, 1])
        mae, rmse = error_metrics(np.abs(values - truth))
        if mae < rmse:
            raise DdmlsError(f"level {level}: MAE {mae} < RMSE {rmse}")
        if cfg.source == "grid":
            h = math.sqrt(2.0) / 2 ** (level + 1)
        else:
            h = fill_distance_estimate(nodes, cfg.fill_resolution)
        rate_inf = rate_2 = None
        if prev is not None:
            if not prev.h > h:
                raise DdmlsError(f"fill distance did not decrease: {prev.h} -> {h}")
            rate_inf = convergence_rate(prev.mae, mae, prev.h, h)
            rate_2 = convergence_rate(prev.rmse, rmse, prev.h, h)
        row = StudyRow(level, len(nodes), h, mae, rate_inf, rmse, rate_2)
        rows.append(row)
        prev = row
    return ConvergenceTable(tuple(rows))


class OscillationReport(NamedTuple):
    max_overshoot: float
    band_width: float


def oscillation_report(
    mls_cfg: MlsConfig,
    fn: TestFunction,
    nodes: NodeSet,
    eval_lo=DEFAULT_EVAL_LO,
    eval_hi=DEFAULT_EVAL_HI,
    eval_n: int = DEFAULT_EVAL_N,
    delta: float | None = None,
    threshold_factor: float = 10.0,
    range_floor: float = 0.05,
) -> OscillationReport:
    """Overshoot beyond the data range, and the width of the high-error band.

    ``max_overshoot`` is the largest distance from an approximant value to the
    interval [min node value, max node value].

    ``band_width`` measures the contiguous high-error collar around the
    discontinuity curve (0 for smooth surfaces). A point is flagged when its
    error exceeds max(threshold_factor * interior error median,
    range_floor * node-value range); the interior is everything farther than
    three indicator radii from the curve, and the floor keeps jump-scale
    smearing the measured quantity when the interior median is very small or
    contaminated. Flagged points are walked outward from the curve in shells
    one evaluation-grid diagonal wide; the band ends at the first empty
    shell, so detached far-field artifacts (e.g. domain-boundary error) do
    not count. The reported width is twice the largest contiguously flagged
    distance.
    """
    if delta is None:
        delta = default_delta(len(nodes))
    field = compute_indicators(nodes, delta) if mls_cfg.mode == "dd" else None
    queries = eval_grid_points(eval_lo, eval_hi, eval_n)
    values = evaluate_or_raise(nodes, mls_cfg, field, queries)
    truth = fn.evaluate(queries[:, 0], queries[:, 1])
    errors = np.abs(values - truth)

    lo, hi = nodes.values.min(), nodes.values.max()
    overshoot = np.maximum(0.0, np.maximum(values - hi, lo - values))
    max_overshoot = float(overshoot.max())

    if fn.curve_distance is None:
        return OscillationReport(max_overshoot, 0.0)
    dist = fn.curve_distance(queries[:, 0], queries[:, 1])
    interior = dist > 3.0 * delta
    reference = errors[interior] if np.any(interior) else errors
    threshold = max(threshold_factor * float(np.median(reference)), range_floor * float(hi - lo))
    flagged_dist = np.sort(dist[errors > threshold])
    if flagged_dist.size == 0:
        return OscillationReport(max_overshoot, 0.0)

    lo_pt = np.asarray(eval_lo, dtype=float)
    hi_pt = np.asarray(eval_hi, dtype=float)
    shell = float(np.linalg.norm((hi_pt - lo_pt) / (eval_n - 1)))
    half_width = 0.0
    edge = 0.0
    while True:
        in_shell = flagged_dist[(flagged_dist >= edge) & (flagged_dist < edge + shell)]
        if in_shell.size == 0:
            break
        half_width = float(in_shell.max())
        edge += shell
    return OscillationReport(max_overshoot, 2.0 * half_width)


def format_error_field_csv(queries: np.ndarray, approx: np.ndarray, truth: np.ndarray | None) -> str:
    """Error-field CSV: x,y,f_true,f_approx,abs_err (truth fields empty if unknown)."""
    pts = np.atleast_2d(queries)
    header = "x,y,f_true,f_approx,abs_err" if pts.shape[1] == 2 else "x,f_true,f_approx,abs_err"
    lines = [header]
    for i, p in enumerate(pts):
        coords = ",".join(f"{c:.17g}" for c in p)
        if truth is None:
            lines.append(f"{coords},,{approx[i]:.17g},")
        else:
            err = abs(approx[i] - truth[i])
            lines.append(f"{coords},{truth[i]:.17g},{approx[i]:.17g},{err:.17g}")
    return "\n".join(lines) + "\n"
