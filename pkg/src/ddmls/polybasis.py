"""Centered monomial basis of the total-degree polynomial space.

Basis terms are the monomials (x - x0)^a * (y - y0)^b with a + b <= degree,
listed in graded-lexicographic order: total degree ascending, then the first
coordinate's exponent descending. For degree 2 in two dimensions the order is
1, x, y, x^2, xy, y^2 (all centered). The evaluated approximant is invariant
under reordering, so the order is an internal convention only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DimensionMismatch, UnsupportedDimension
from .geometry import SUPPORTED_DIMS, as_point


def basis_size(n: int, d: int) -> int:
    """Dimension of the polynomials of total degree <= d in n variables."""
    if n not in SUPPORTED_DIMS:
        raise UnsupportedDimension(f"only dimensions {SUPPORTED_DIMS} are supported, got {n}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    return comb(d + n, n)


def _graded_lex_exponents(n: int, d: int) -> np.ndarray:
    if n == 1:
        exps = [(t,) for t in range(d + 1)]
    else:
        exps = [(a, t - a) for t in range(d + 1) for a in range(t, -1, -1)]
    return np.asarray(exps, dtype=np.int64)


@dataclass(frozen=True)
class BasisSpec:
    """Dimension/degree pair plus the derived exponent table."""

    dim: int
    degree: int
    exponents: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis_size(self.dim, self.degree)  # validates dim and degree
        exps = _graded_lex_exponents(self.dim, self.degree)
        exps.setflags(write=False)
        object.__setattr__(self, "exponents", exps)

    @property
    def size(self) -> int:
        return self.exponents.shape[0]


def eval_basis(spec: BasisSpec, x, x0) -> np.ndarray:
    """All basis monomials centered at ``x0`` evaluated at ``x``."""
    p = as_point(x, spec.dim)
    c = as_point(x0, spec.dim)
    return eval_basis_many(spec, p[None, :], c)[0]


def eval_basis_many(spec: BasisSpec, points: np.ndarray, x0) -> np.ndarray:
    """Design-matrix rows: basis at each of ``points`` centered at ``x0``.

    Returns an array of shape (len(points), spec.size).
    """
    c = as_point(x0, spec.dim)
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != spec.dim:
        raise DimensionMismatch(f"expected points of shape (k, {spec.dim}), got {pts.shape}")
    d = spec.degree
    dx = pts - c
    # per-axis power tables (k, d+1), combined through the exponent list
    out = np.ones((pts.shape[0], spec.size))
    for axis in range(spec.dim):
        powers = np.ones((pts.shape[0], d + 1))
        for t in range(1, d + 1):
            powers[:, t] = powers[:, t - 1] * dx[:, axis]
        out *= powers[:, spec.exponents[:, axis]]
    return out
