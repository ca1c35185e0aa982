"""Per-node smoothness indicators from local least-squares residuals.

Each node gets the mean absolute residual of an unweighted affine fit over its
delta-ball neighborhood. Indicators are O(h^2) where the data are smooth and
stay bounded away from zero where the neighborhood straddles a jump, so
dividing radial weights by (eps_reg + indicator)^t suppresses nodes near
discontinuities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt

import numpy as np

from .errors import NonPositiveDelta, TooFewNodes
from .geometry import NodeSet, SpatialIndex, ball_query, build_spatial_index

_RANK_TOL = 1e-10


def default_delta(n_nodes: int) -> float:
    """Indicator ball radius recipe tied to the node count: sqrt(2)/floor(sqrt(N)/2)."""
    if n_nodes < 4:
        raise TooFewNodes(f"delta recipe needs N >= 4 nodes, got {n_nodes}")
    return math.sqrt(2.0) / (isqrt(n_nodes) // 2)


@dataclass(frozen=True)
class DdWeightParams:
    """Regularization and exponent of the data-dependent weight divisor."""

    eps_reg: float = 1e-6
    t: float = 4.0

    def __post_init__(self):
        if not (self.eps_reg > 0):
            raise ValueError(f"eps_reg must be > 0, got {self.eps_reg}")
        if not (self.t > 0):
            raise ValueError(f"t must be > 0, got {self.t}")


@dataclass(frozen=True)
class SmoothnessField:
    """Per-node indicators plus the radius they were computed with."""

    indicators: np.ndarray
    delta: float
    neighbor_counts: np.ndarray

    def __post_init__(self):
        ind = np.asarray(self.indicators, dtype=float)
        cnt = np.asarray(self.neighbor_counts, dtype=np.intp)
        if ind.shape != cnt.shape or ind.ndim != 1:
            raise ValueError("indicators and neighbor_counts must be 1-D and equally long")
        if np.any(ind < 0) or not np.all(np.isfinite(ind)):
            raise ValueError("indicators must be finite and >= 0")
        if np.any(cnt < 1):
            raise ValueError("every neighborhood contains at least its own center node")
        if not (self.delta > 0):
            raise NonPositiveDelta(f"delta must be > 0, got {self.delta}")
        ind.setflags(write=False)
        cnt.setflags(write=False)
        object.__setattr__(self, "indicators", ind)
        object.__setattr__(self, "neighbor_counts", cnt)


def dd_weight(base, indicator, params: DdWeightParams):
    """Divide a base radial weight by (eps_reg + indicator)^t."""
    return base / (params.eps_reg + indicator) ** params.t


def compute_indicators(nodes: NodeSet, delta: float, index: SpatialIndex | None = None) -> SmoothnessField:
    """Smoothness indicator of every node over its delta-ball neighborhood.

    Fits an unweighted affine polynomial to the values in each closed ball
    B(x_i, delta) and averages the absolute residuals. Neighborhoods too small
    for the affine fit (or with a rank-deficient normal system, e.g. collinear
    nodes) fall back to the constant fit around the mean.
    """
    if not (delta > 0) or not math.isfinite(delta):
        raise NonPositiveDelta(f"delta must be finite and > 0, got {delta}")
    if index is None:
        index = build_spatial_index(nodes, delta)

    pts = nodes.points
    vals = nodes.values
    n = len(nodes)
    m1 = nodes.dim + 1  # affine basis size

    neighborhoods = [ball_query(index, nodes, pts[i], delta) for i in range(n)]
    counts = np.array([len(nb) for nb in neighborhoods], dtype=np.intp)
    indicators = np.empty(n)

    todo_constant = []
    for k in np.unique(counts):
        group = np.flatnonzero(counts == k)
        if k < m1:
            todo_constant.extend(group)
            continue
        idx = np.stack([neighborhoods[i] for i in group])        # (g, k)
        centers = pts[group][:, None, :]
        rel = (pts[idx] - centers) / delta                       # (g, k, dim)
        design = np.concatenate([np.ones((len(group), k, 1)), rel], axis=2)
        f = vals[idx]                                            # (g, k)
        gram = np.einsum("gki,gkj->gij", design, design)
        rhs = np.einsum("gki,gk->gi", design, f)

        eigs = np.linalg.eigvalsh(gram)
        deficient = eigs[:, 0] <= _RANK_TOL * eigs[:, -1]
        coef = np.zeros((len(group), m1))
        ok = ~deficient
        if np.any(ok):
            coef[ok] = np.linalg.solve(gram[ok], rhs[ok, :, None])[:, :, 0]
        resid = np.abs(f - np.einsum("gki,gi->gk", design, coef))
        indicators[group] = resid.mean(axis=1)
        todo_constant.extend(group[deficient])

    for i in todo_constant:
        f = vals[neighborhoods[i]]
        indicators[i] = np.abs(f - f.mean()).mean()

    return SmoothnessField(indicators, float(delta), counts)
