"""Noise regimes: superlevel sets of a probability curve over noise probabilities.

One-dimensional regions live on ``p`` in ``[0, 1]``; two-dimensional ones on
the simplex ``p1, p2 >= 0, p1 + p2 <= 1`` of a three-point noise support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import BoundaryPoint

DEFAULT_RESOLUTION_1D = 10_000
DEFAULT_RESOLUTION_2D = 400
BISECT_XTOL = 1e-10


@dataclass(frozen=True)
class Region1D:
    """Union of disjoint closed intervals inside ``[0, 1]``, sorted."""

    intervals: tuple
    resolution: int = DEFAULT_RESOLUTION_1D

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        for a, b in ivs:
            if not 0 <= a <= b <= 1:
                raise ValueError(f"bad interval [{a}, {b}]")
        for (_, b), (c, _) in zip(ivs, ivs[1:]):
            if not b < c:
                raise ValueError("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    def contains(self, p: float) -> bool:
        return any(a <= p <= b for a, b in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def measure(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def rounded(self, digits: int = 3) -> list[list[float]]:
        return [[round(a, digits), round(b, digits)] for a, b in self.intervals]


def _crossing(fn, zeta, x_in, x_out):
    # fn(x_in) >= zeta > fn(x_out); return the boundary point between them
    g = lambda x: fn(x) - zeta
    if g(x_in) == 0:
        return x_in
    lo, hi = sorted((x_in, x_out))
    return optimize.bisect(g, lo, hi, xtol=BISECT_XTOL)


def superlevel_region_1d(prob_fn: Callable[[float], float], zeta: float,
                         resolution: int = DEFAULT_RESOLUTION_1D) -> Region1D:
    """``{p : prob_fn(p) >= zeta}`` by grid scan plus bisection at each edge."""
    if resolution < 1000:
        raise ValueError("resolution must be at least 1000")
    xs = np.linspace(0.0, 1.0, resolution + 1)
    vals = np.array([float(prob_fn(x)) for x in xs])
    inside = vals >= zeta
    intervals = []
    j = 0
    N = len(xs)
    while j < N:
        if not inside[j]:
            j += 1
            continue
        k = j
        while k + 1 < N and inside[k + 1]:
            k += 1
        lo = xs[j] if j == 0 else _crossing(prob_fn, zeta, xs[j], xs[j - 1])
        hi = xs[k] if k == N - 1 else _crossing(prob_fn, zeta, xs[k], xs[k + 1])
        intervals.append((lo, hi))
        j = k + 1
    return Region1D(tuple(intervals), resolution)


def intersect_regions(regions) -> Region1D:
    """Intersection of regions computed at one resolution."""
    regions = list(regions)
    if not regions:
        raise ValueError("nothing to intersect")
    res = {r.resolution for r in regions}
    if len(res) != 1:
        raise ValueError("regions were computed at different resolutions")
    current = list(regions[0].intervals)
    for r in regions[1:]:
        out = []
        i = j = 0
        other = r.intervals
        while i < len(current) and j < len(other):
            lo = max(current[i][0], other[j][0])
            hi = min(current[i][1], other[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if current[i][1] < other[j][1]:
                i += 1
            else:
                j += 1
        current = out
    return Region1D(tuple(current), res.pop())


def safety_value_1d(prob_fn, resolution: int = DEFAULT_RESOLUTION_1D) -> tuple[float, float]:
    """Global minimum ``(p*, value)`` of ``prob_fn`` over ``[0, 1]``.

    Dense grid first, then a bounded Brent search (golden section with
    parabolic steps) inside every grid basin.
    """
    xs = np.linspace(0.0, 1.0, resolution + 1)
    vals = np.array([float(prob_fn(x)) for x in xs])
    best_x, best_v = float(xs[np.argmin(vals)]), float(vals.min())
    for i in range(1, len(xs) - 1):
        if vals[i] <= vals[i - 1] and vals[i] <= vals[i + 1]:
            res = optimize.minimize_scalar(
                lambda x: float(prob_fn(x)), bounds=(xs[i - 1], xs[i + 1]),
                method="bounded", options={"xatol": 1e-10},
            )
            if res.fun < best_v:
                best_x, best_v = float(res.x), float(res.fun)
    return best_x, best_v


def second_difference(fn, p: float, h: float = 1e-3) -> float:
    """Central second difference; exact for cubics apart from roundoff."""
    return (fn(p + h) - 2 * fn(p) + fn(p - h)) / (h * h)


def min_second_difference(fn, n_points: int = 999, h: float = 1e-3) -> float:
    """Smallest second difference over interior grid points of ``[0, 1]``."""
    xs = np.linspace(h, 1 - h, n_points)
    return min(second_difference(fn, float(x), h) for x in xs)


@dataclass(frozen=True)
class Region2D:
    """Cells of a ``k x k`` grid on ``[0,1]^2``; only simplex cells count.

    ``in_simplex[i, j]`` and ``inside[i, j]`` refer to the cell whose centre is
    ``((i + 0.5)/k, (j + 0.5)/k)``.
    """

    inside: np.ndarray
    in_simplex: np.ndarray
    resolution: int

    def cell_of(self, p1: float, p2: float) -> tuple[int, int]:
        k = self.resolution
        i = min(max(int(math.floor(p1 * k)), 0), k - 1)
        j = min(max(int(math.floor(p2 * k)), 0), k - 1)
        # points on the hypotenuse fall into the nearest simplex cell
        while not self.in_simplex[i, j] and i + j > 0:
            if i >= j:
                i -= 1
            else:
                j -= 1
        return i, j

    def contains(self, p1: float, p2: float) -> bool:
        return bool(self.inside[self.cell_of(p1, p2)])

    def covers_simplex(self) -> bool:
        return bool(np.all(self.inside[self.in_simplex]))

    def fraction(self) -> float:
        return float(self.inside[self.in_simplex].mean())

    def cells(self) -> list[list[int]]:
        return [[int(i), int(j)] for i, j in zip(*np.nonzero(self.inside))]


def simplex_grid(resolution: int = DEFAULT_RESOLUTION_2D):
    k = resolution
    c = (np.arange(k) + 0.5) / k
    P1, P2 = np.meshgrid(c, c, indexing="ij")
    return P1, P2, P1 + P2 <= 1.0


def _evaluate(fn, P1, P2):
    try:
        out = np.asarray(fn(P1, P2), dtype=float)
        if out.shape == P1.shape:
            return out
    except TypeError:
        pass
    return np.vectorize(lambda a, b: float(fn(a, b)))(P1, P2)


def superlevel_region_2d(prob_fn, zeta: float, resolution: int = DEFAULT_RESOLUTION_2D) -> Region2D:
    """Mark simplex cells whose centre value reaches ``zeta``."""
    P1, P2, simplex = simplex_grid(resolution)
    vals = _evaluate(prob_fn, P1, P2)
    return Region2D((vals >= zeta) & simplex, simplex, resolution)


def simplex_minimum(prob_fn, resolution: int = DEFAULT_RESOLUTION_2D):
    """Grid search over simplex cells then a constrained local polish.

    Returns ``((p1, p2), value)``.  Not a certified global minimum.
    """
    P1, P2, simplex = simplex_grid(resolution)
    vals = _evaluate(prob_fn, P1, P2)
    vals = np.where(simplex, vals, np.inf)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    x0 = np.array([P1[i, j], P2[i, j]])
    res = optimize.minimize(
        lambda x: float(prob_fn(x[0], x[1])), x0, method="SLSQP",
        bounds=[(0, 1), (0, 1)],
        constraints=[{"type": "ineq", "fun": lambda x: 1 - x[0] - x[1]}],
        options={"ftol": 1e-14},
    )
    if res.success and res.fun <= vals[i, j]:
        return (float(res.x[0]), float(res.x[1])), float(res.fun)
    return (float(x0[0]), float(x0[1])), float(vals[i, j])


@dataclass(frozen=True)
class Hessian2D:
    matrix: np.ndarray
    eigenvalues: tuple

    @property
    def determinant(self) -> float:
        return float(self.matrix[0, 0] * self.matrix[1, 1] - self.matrix[0, 1] ** 2)

    @property
    def indefinite(self) -> bool:
        return self.eigenvalues[0] < 0 < self.eigenvalues[1]


def hessian_2d(fn, p1: float, p2: float, step: float = 1e-4, simplex: bool = True) -> Hessian2D:
    """Central-difference Hessian at an interior point and its eigenvalues.

    With ``simplex=True`` the stencil must stay inside the open simplex,
    otherwise inside the open unit square.
    """
    if not 0 < step <= 1e-4:
        raise ValueError("step must be in (0, 1e-4]")
    h = step
    inside = p1 - h > 0 and p2 - h > 0 and p1 + h < 1 and p2 + h < 1
    if simplex:
        inside = inside and p1 + p2 + 2 * h < 1
    if not inside:
        raise BoundaryPoint(f"({p1}, {p2}) is too close to the boundary for step {h}")
    f0 = fn(p1, p2)
    fxx = (fn(p1 + h, p2) - 2 * f0 + fn(p1 - h, p2)) / h**2
    fyy = (fn(p1, p2 + h) - 2 * f0 + fn(p1, p2 - h)) / h**2
    fxy = (fn(p1 + h, p2 + h) - fn(p1 + h, p2 - h)
           - fn(p1 - h, p2 + h) + fn(p1 - h, p2 - h)) / (4 * h**2)
    H = np.array([[fxx, fxy], [fxy, fyy]], dtype=float)
    mean = (fxx + fyy) / 2
    rad = math.hypot((fxx - fyy) / 2, fxy)
    return Hessian2D(H, (mean - rad, mean + rad))
