"""Per-query weighted least-squares solves, in plain and data-dependent modes.

Each query point gets an independent fit: gather the nodes with positive
truncated weight, optionally divide the weights by (eps_reg + indicator)^t,
and minimize sum_i w_i (f_i - p(x_i))^2 over polynomials p of the configured
degree, centered at the query. The approximant value is the constant
coefficient of the minimizer.

The solve runs a thin pivoted-QR factorization of the sqrt(w)-scaled design
matrix, which is mathematically equivalent to the normal-equation solution
(X^T W X)^{-1} X^T W f but does not square the condition number.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Literal

import numpy as np
import scipy.linalg

from .errors import InsufficientNodes, NonFiniteInput, RankDeficient
from .geometry import NodeSet, SpatialIndex, as_point, ball_query, build_spatial_index
from .kernels import WeightConfig, support_radius, weight_profile
from .polybasis import BasisSpec, eval_basis_many
from .smoothness import DdWeightParams, SmoothnessField, dd_weight

Mode = Literal["linear", "dd"]

# status tags reported by evaluate_field
STATUS_INSUFFICIENT = "insufficient_nodes"
STATUS_RANK_DEFICIENT = "rank_deficient"
STATUS_NON_FINITE = "non_finite_input"

_STATUS_OF = {
    InsufficientNodes: STATUS_INSUFFICIENT,
    RankDeficient: STATUS_RANK_DEFICIENT,
    NonFiniteInput: STATUS_NON_FINITE,
}
EXCEPTION_OF_STATUS = {tag: exc for exc, tag in _STATUS_OF.items()}

# relative pad on root-found support radii so the candidate gather never
# misses a node whose truncated weight is still positive
_SUPPORT_PAD = 1e-9


@dataclass(frozen=True)
class MlsConfig:
    """Degree, kernel weights, mode and solver tolerance for point solves."""

    basis: BasisSpec
    weights: WeightConfig
    mode: Mode = "linear"
    dd_params: DdWeightParams | None = None
    rank_tol: float = 1e-12

    def __post_init__(self):
        if self.mode not in ("linear", "dd"):
            raise ValueError(f"mode must be 'linear' or 'dd', got {self.mode!r}")
        if not (0.0 < self.rank_tol < 1.0):
            raise ValueError(f"rank_tol must lie in (0, 1), got {self.rank_tol}")
        if self.mode == "dd" and self.dd_params is None:
            object.__setattr__(self, "dd_params", DdWeightParams())


@dataclass(frozen=True)
class MlsSolution:
    """Solve result: approximant value, full coefficient vector, active node count."""

    value: float
    coefficients: np.ndarray = dataclass_field(repr=False)
    active_count: int


def gather_active(
    nodes: NodeSet,
    index: SpatialIndex,
    cfg: MlsConfig,
    field: SmoothnessField | None,
    x0,
) -> tuple[np.ndarray, np.ndarray]:
    """Active node indices (ascending) and their effective weights at ``x0``.

    A node is active when its truncated radial weight is positive. In
    data-dependent mode the weights are additionally divided by
    (eps_reg + indicator)^t; a smoothness field is then required (and is
    rejected in linear mode, where it would silently be ignored).
    """
    if cfg.mode == "dd" and field is None:
        raise ValueError("data-dependent mode needs a SmoothnessField")
    if cfg.mode == "linear" and field is not None:
        raise ValueError("linear mode does not take a SmoothnessField")
    x = as_point(x0, nodes.dim)

    radius = support_radius(cfg.weights)
    lower, upper = nodes.domain
    farthest_corner = float(np.linalg.norm(np.maximum(np.abs(x - lower), np.abs(x - upper))))
    if radius >= farthest_corner:
        # support covers the whole domain seen from x0
        idx = np.arange(len(nodes), dtype=np.intp)
    else:
        idx = ball_query(index, nodes, x, radius * (1.0 + _SUPPORT_PAD))
        if idx.size == 0:
            return idx, np.empty(0)

    dists = np.sqrt(((nodes.points[idx] - x) ** 2).sum(axis=1))
    w = weight_profile(cfg.weights, dists)
    keep = w > 0.0
    idx, w = idx[keep], w[keep]
    if cfg.mode == "dd":
        w = dd_weight(w, field.indicators[idx], cfg.dd_params)
    return idx, w


def solve_weighted(
    points: np.ndarray,
    values: np.ndarray,
    weights: np.ndarray,
    x0,
    basis: BasisSpec,
    rank_tol: float = 1e-12,
) -> MlsSolution:
    """Weighted polynomial fit centered at ``x0`` from explicit weights."""
    x = as_point(x0, basis.dim)
    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    m = basis.size
    if pts.shape[0] < m:
        raise InsufficientNodes(
            f"{pts.shape[0]} active nodes at {tuple(x)} but the degree-{basis.degree} "
            f"fit needs at least {m}"
        )
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(w))):
        raise NonFiniteInput("node values and weights must be finite")

    sw = np.sqrt(w)
    design = eval_basis_many(basis, pts, x) * sw[:, None]
    q, r, piv = scipy.linalg.qr(design, mode="economic", pivoting=True, check_finite=False)
    pivots = np.abs(np.diagonal(r))
    if pivots[0] == 0.0 or pivots.min() < rank_tol * pivots[0]:
        raise RankDeficient(
            f"scaled design matrix at {tuple(x)} is numerically rank-deficient "
            f"(pivot ratio {pivots.min() / pivots[0] if pivots[0] else 0.0:.3e} < {rank_tol:g})"
        )
    cp = scipy.linalg.solve_triangular(r, q.T @ (vals * sw), check_finite=False)
    coef = np.empty(m)
    coef[piv] = cp
    return MlsSolution(float(coef[0]), coef, int(pts.shape[0]))


def solve_point(
    nodes: NodeSet,
    index: SpatialIndex,
    cfg: MlsConfig,
    field: SmoothnessField | None,
    x0,
) -> MlsSolution:
    """Approximant value at a single query point."""
    x = as_point(x0, nodes.dim)
    idx, w = gather_active(nodes, index, cfg, field, x)
    return solve_weighted(nodes.points[idx], nodes.values[idx], w, x, cfg.basis, cfg.rank_tol)


def default_cell_size(nodes: NodeSet, cfg: MlsConfig) -> float:
    """Index cell size: the weight support radius, capped at the domain extent."""
    lower, upper = nodes.domain
    extent = float(max(np.max(upper - lower), 1e-12))
    return min(support_radius(cfg.weights), extent)


def evaluate_field(
    nodes: NodeSet,
    cfg: MlsConfig,
    field: SmoothnessField | None,
    queries,
    index: SpatialIndex | None = None,
) -> tuple[np.ndarray, list[str | None]]:
    """Solve every query independently, isolating per-query failures.

    Returns (values, statuses): failed entries hold NaN and a status tag
    ('insufficient_nodes', 'rank_deficient' or 'non_finite_input'); successful
    entries have status None. Query order is preserved.
    """
    pts = np.atleast_2d(np.asarray(queries, dtype=float))
    if pts.size == 0:
        raise ValueError("queries must be nonempty")
    if pts.shape[1] != nodes.dim:
        raise ValueError(f"queries of dimension {pts.shape[1]} against {nodes.dim}-D nodes")
    if index is None:
        index = build_spatial_index(nodes, default_cell_size(nodes, cfg))

    values = np.full(pts.shape[0], np.nan)
    statuses: list[str | None] = [None] * pts.shape[0]
    for i in range(pts.shape[0]):
        try:
            values[i] = solve_point(nodes, index, cfg, field, pts[i]).value
        except (InsufficientNodes, RankDeficient, NonFiniteInput) as exc:
            statuses[i] = _STATUS_OF[type(exc)]
    return values, statuses
