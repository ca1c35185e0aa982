"""Radial weight kernels and the scaled per-node weight function.

Eight kernels are available, named by the usual acronyms::

    G    exp(-r^2)                     Gaussian, C-infinity
    IMQ  (1 + r^2)^(-1/2)              inverse multiquadric, C-infinity
    M0   exp(-r)                       Matern, C0
    M2   exp(-r) (1 + r)               Matern, C2
    M4   exp(-r) (3 + 3r + r^2)        Matern, C4
    W0   (1 - r)_+^2                   Wendland, C0
    W2   (1 - r)_+^4 (4r + 1)          Wendland, C2
    W4   (1 - r)_+^6 (35r^2 + 18r + 3) Wendland, C4

The per-node weight is ``weight(cfg, x, xi) = kernel(shape_eps * ||x - xi||)``.
Globally supported kernels are truncated: values <= cfg.truncation count as
exactly zero, which keeps every weight gather finite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from math import isqrt

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch, NegativeRadius
from .geometry import as_point


class KernelKind(str, enum.Enum):
    G = "G"
    IMQ = "IMQ"
    M0 = "M0"
    M2 = "M2"
    M4 = "M4"
    W0 = "W0"
    W2 = "W2"
    W4 = "W4"

    @classmethod
    def parse(cls, name) -> "KernelKind":
        """Case-insensitive lookup by acronym; passes KernelKind values through."""
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown kernel {name!r}; expected one of {valid}") from None


COMPACT_KINDS = frozenset({KernelKind.W0, KernelKind.W2, KernelKind.W4})

DEFAULT_GLOBAL_TRUNCATION = 1e-10


def _wendland_cut(r, poly):
    t = np.maximum(1.0 - r, 0.0)
    return np.where(r < 1.0, poly(r, t), 0.0)


_KERNELS = {
    KernelKind.G: lambda r: np.exp(-(r * r)),
    KernelKind.IMQ: lambda r: 1.0 / np.sqrt(1.0 + r * r),
    KernelKind.M0: lambda r: np.exp(-r),
    KernelKind.M2: lambda r: np.exp(-r) * (1.0 + r),
    KernelKind.M4: lambda r: np.exp(-r) * (3.0 + 3.0 * r + r * r),
    KernelKind.W0: lambda r: _wendland_cut(r, lambda r, t: t * t),
    KernelKind.W2: lambda r: _wendland_cut(r, lambda r, t: t**4 * (4.0 * r + 1.0)),
    KernelKind.W4: lambda r: _wendland_cut(r, lambda r, t: t**6 * (35.0 * r * r + 18.0 * r + 3.0)),
}


def kernel_eval(kind: KernelKind, r):
    """Evaluate the kernel at scaled radius ``r`` (scalar or array), r >= 0."""
    kind = KernelKind.parse(kind)
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise NegativeRadius("kernel radius must be >= 0")
    out = _KERNELS[kind](arr)
    return float(out) if np.isscalar(r) or arr.ndim == 0 else out


def default_shape_eps(n_nodes: int) -> float:
    """Shape parameter recipe tied to the node count: 0.5 * floor(sqrt(N)/2)."""
    if n_nodes < 4:
        raise ValueError(f"shape parameter recipe needs N >= 4 nodes, got {n_nodes}")
    return 0.5 * (isqrt(n_nodes) // 2)


def default_truncation(kind: KernelKind) -> float:
    """Zero for compactly supported kernels, 1e-10 for globally supported ones."""
    return 0.0 if KernelKind.parse(kind) in COMPACT_KINDS else DEFAULT_GLOBAL_TRUNCATION


@dataclass(frozen=True)
class WeightConfig:
    """Kernel kind, shape parameter and truncation threshold.

    ``shape_eps`` scales distances: weight = kernel(shape_eps * ||x - xi||).
    ``truncation`` in [0, 1): for globally supported kernels, kernel values
    <= truncation are reported as exactly 0 (compact kernels ignore it).
    """

    kind: KernelKind
    shape_eps: float
    truncation: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind.parse(self.kind))
        if not (self.shape_eps > 0) or not math.isfinite(self.shape_eps):
            raise ValueError(f"shape_eps must be finite and > 0, got {self.shape_eps}")
        if not (0.0 <= self.truncation < 1.0):
            raise ValueError(f"truncation must lie in [0, 1), got {self.truncation}")


def weight_profile(cfg: WeightConfig, distances):
    """Vectorized truncated weight as a function of physical distance."""
    w = kernel_eval(cfg.kind, cfg.shape_eps * np.asarray(distances, dtype=float))
    if cfg.kind not in COMPACT_KINDS and cfg.truncation > 0.0:
        w = np.where(w <= cfg.truncation, 0.0, w)
    return w


def weight(cfg: WeightConfig, x, xi) -> float:
    """Truncated radial weight of node ``xi`` seen from evaluation point ``x``."""
    p = as_point(x)
    q = as_point(xi)
    if p.shape[0] != q.shape[0]:
        raise DimensionMismatch(f"points of dimension {p.shape[0]} and {q.shape[0]}")
    return float(weight_profile(cfg, np.sqrt(((p - q) ** 2).sum())))


def support_radius(cfg: WeightConfig) -> float:
    """Physical radius beyond which the truncated weight is zero.

    Wendland kernels: 1/shape_eps. Globally supported kernels: radius at which
    the kernel first reaches ``truncation`` (math.inf when truncation is 0).
    """
    if cfg.kind in COMPACT_KINDS:
        return 1.0 / cfg.shape_eps
    tau = cfg.truncation
    if tau == 0.0:
        return math.inf
    if cfg.kind is KernelKind.G:
        scaled = math.sqrt(-math.log(tau))
    elif cfg.kind is KernelKind.IMQ:
        scaled = math.sqrt(1.0 / (tau * tau) - 1.0)
    elif cfg.kind is KernelKind.M0:
        scaled = -math.log(tau)
    else:
        # M2/M4 have no elementary inverse; both are strictly decreasing,
        # so a bracketed root find is exact to machine tolerance
        f = _KERNELS[cfg.kind]
        hi = 1.0
        while f(hi) > tau:
            hi *= 2.0
        scaled = brentq(lambda r: f(r) - tau, 0.0, hi, xtol=1e-15, rtol=8.9e-16)
    return scaled / cfg.shape_eps
