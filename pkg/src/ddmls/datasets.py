"""Node-set generators, benchmark test surfaces and CSV ingestion.

The piecewise surfaces follow one convention: a level-set function gamma
splits the plane, the first branch applies where gamma >= 0 (so points exactly
on the discontinuity curve take the first branch), the second elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParseError
from .geometry import NodeSet, as_point

UNIT_SQUARE = (np.zeros(2), np.ones(2))


@dataclass(frozen=True)
class TestFunction:
    """Benchmark surface: a vectorized evaluator plus optional jump geometry.

    ``curve_distance`` maps (x, y) arrays to the distance from the
    discontinuity curve; it is None for smooth surfaces.
    """

    name: str
    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    curve_distance: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None


def _franke_surface(x, y):
    t1 = 0.75 * np.exp(-((9 * x - 2) ** 2 + (9 * y - 2) ** 2) / 4)
    t2 = 0.75 * np.exp(-((9 * x + 1) ** 2) / 49 - (9 * y + 1) / 10)
    t3 = 0.5 * np.exp(-((9 * x - 7) ** 2 + (9 * y - 3) ** 2) / 4)
    t4 = -0.2 * np.exp(-((9 * x - 4) ** 2) - (9 * y - 7) ** 2)
    return t1 + t2 + t3 + t4


def custom(
    gamma: Callable,
    f_pos: Callable,
    f_neg: Callable,
    curve_distance: Callable | None = None,
    name: str = "custom",
) -> TestFunction:
    """Piecewise surface: f_pos where gamma >= 0, f_neg elsewhere."""

    def evaluate(x, y):
        return np.where(np.asarray(gamma(x, y)) >= 0, f_pos(x, y), f_neg(x, y))

    return TestFunction(name, evaluate, curve_distance)


def franke() -> TestFunction:
    """The classic four-bump smooth benchmark surface."""
    return TestFunction("franke", _franke_surface)


def g_levin() -> TestFunction:
    """Trigonometric surface with a Gaussian bump cut into a central disc."""
    r2 = lambda x, y: (x - 0.5) ** 2 + (y - 0.5) ** 2
    return custom(
        gamma=lambda x, y: r2(x, y) - 0.1,
        f_pos=lambda x, y: -(x + y + 1) * np.cos(4 * x) + np.sin(4 * (x + y)),
        f_neg=lambda x, y: np.exp(-10 * r2(x, y)),
        curve_distance=lambda x, y: np.abs(np.sqrt(r2(x, y)) - np.sqrt(0.1)),
        name="glevin",
    )


def z_circle() -> TestFunction:
    """cos(xy) outside the circle of radius 1/4 around (1/2, 1/2), sin(xy) inside."""
    r2 = lambda x, y: (x - 0.5) ** 2 + (y - 0.5) ** 2
    return custom(
        gamma=lambda x, y: r2(x, y) - 0.25**2,
        f_pos=lambda x, y: np.cos(x * y),
        f_neg=lambda x, y: np.sin(x * y),
        curve_distance=lambda x, y: np.abs(np.sqrt(r2(x, y)) - 0.25),
        name="zcircle",
    )


def piecewise_franke(constant: float = 1.0) -> TestFunction:
    """Franke surface with a constant offset outside the origin-centered quarter disc."""
    if not np.isfinite(constant):
        raise ValueError("offset constant must be finite")
    return custom(
        gamma=lambda x, y: 0.25**2 - x**2 - y**2,
        f_pos=_franke_surface,
        f_neg=lambda x, y: _franke_surface(x, y) + constant,
        curve_distance=lambda x, y: np.abs(np.sqrt(x**2 + y**2) - 0.25),
        name=f"pfranke:{constant:g}",
    )


_BUILTINS = {"franke": franke, "glevin": g_levin, "zcircle": z_circle}


def parse_test_function(name: str) -> TestFunction:
    """Resolve a CLI-style function name: franke, glevin, zcircle, pfranke:<const>."""
    key = name.strip().lower()
    if key in _BUILTINS:
        return _BUILTINS[key]()
    if key.startswith("pfranke:"):
        try:
            return piecewise_franke(float(key.split(":", 1)[1]))
        except ValueError:
            raise ValueError(f"bad pfranke constant in {name!r}") from None
    if key == "pfranke":
        return piecewise_franke()
    valid = ", ".join([*_BUILTINS, "pfranke:<const>"])
    raise ValueError(f"unknown test function {name!r}; expected one of {valid}")


def eval_test_function(fn: TestFunction, x) -> float:
    """Scalar evaluation at a single 2-D point."""
    p = as_point(x, 2)
    return float(fn.evaluate(np.asarray(p[0]), np.asarray(p[1])))


def sample(fn: TestFunction, nodes: NodeSet) -> NodeSet:
    """Fill node values from the test surface (geometry unchanged)."""
    pts = nodes.points
    return nodes.with_values(fn.evaluate(pts[:, 0], pts[:, 1]))


def regular_grid(level: int) -> NodeSet:
    """The (2^level + 1)^2 uniform grid on the unit square, values zeroed."""
    if level < 1:
        raise ValueError(f"grid level must be >= 1, got {level}")
    side = 2**level + 1
    axis = np.arange(side) / 2**level
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return NodeSet(pts, np.zeros(side * side), UNIT_SQUARE)


def _radical_inverse(i: int, base: int) -> float:
    inv = 1.0 / base
    scale = inv
    out = 0.0
    while i > 0:
        out += (i % base) * scale
        i //= base
        scale *= inv
    return out


def halton_points(n: int) -> NodeSet:
    """First ``n`` points of the 2-D Halton sequence, bases (2, 3), indices 1..n.

    Starting at index 1 skips the degenerate point (0, 0). Values are zeroed.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 points, got {n}")
    pts = np.empty((n, 2))
    for i in range(1, n + 1):
        pts[i - 1, 0] = _radical_inverse(i, 2)
        pts[i - 1, 1] = _radical_inverse(i, 3)
    return NodeSet(pts, np.zeros(n), UNIT_SQUARE)


def save_csv(nodes: NodeSet, path) -> None:
    """Write nodes as CSV (header x,y,f or x,f) with 17 significant digits."""
    with open(path, "w", newline="\n") as fh:
        fh.write(format_nodes_csv(nodes))


def format_nodes_csv(nodes: NodeSet) -> str:
    header = "x,y,f" if nodes.dim == 2 else "x,f"
    lines = [header]
    for p, v in zip(nodes.points, nodes.values):
        lines.append(",".join(f"{c:.17g}" for c in (*p, v)))
    return "\n".join(lines) + "\n"


def load_csv(path) -> NodeSet:
    """Read a node CSV written by :func:`save_csv` (round-trip exact)."""
    with open(path, newline="") as fh:
        raw = fh.read()
    lines = raw.split("\n")
    if not lines or lines[0].strip() not in ("x,y,f", "x,f"):
        raise ParseError(1, "expected header 'x,y,f' or 'x,f'")
    dim = 2 if lines[0].strip() == "x,y,f" else 1

    points, values = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != dim + 1:
            raise ParseError(lineno, f"expected {dim + 1} fields, got {len(fields)}")
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise ParseError(lineno, f"non-numeric field in {line!r}") from None
        points.append(row[:dim])
        values.append(row[dim])
    return NodeSet(np.asarray(points), np.asarray(values))
