"""Geometric kernel for weighted points (balls) in R^3.

Provides the power distance, ortho-centers/ortho-sizes of simplices spanned
by 1..4 balls, the closed-inequality domination predicate, and the canonical
ordering of simplex keys. All comparisons use an absolute slack
(`TolerancePolicy.eps_abs`, units of squared length) instead of symbolic
perturbation; affine dependence is detected during the linear solve via
`TolerancePolicy.eps_singular`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DegenerateSimplex


@dataclass(frozen=True)
class TolerancePolicy:
    """Numeric comparison policy.

    eps_abs: absolute slack for power-distance comparisons (A^2). Values
        within eps_abs compare as equal and ties count as satisfied.
    eps_singular: pivot threshold below which the ortho-center solve is
        declared singular (affinely dependent centers).
    """

    eps_abs: float = 1e-9
    eps_singular: float = 1e-12

    def __post_init__(self):
        if not (self.eps_abs > 0.0 and self.eps_singular > 0.0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOLERANCE = TolerancePolicy()


@dataclass(frozen=True)
class Ball:
    """A weighted point: center (A), radius (A), stable input ordinal."""

    center: tuple[float, float, float]
    radius: float
    index: int = 0

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        if len(center) != 3:
            raise ValueError("center must have exactly 3 components")
        if not all(math.isfinite(c) for c in center):
            raise ValueError(f"ball {self.index}: non-finite center {center}")
        radius = float(self.radius)
        if not (math.isfinite(radius) and radius >= 0.0):
            raise ValueError(f"ball {self.index}: radius must be finite and >= 0")
        if self.index < 0:
            raise ValueError("index must be non-negative")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", radius)


@dataclass(frozen=True)
class SimplexKey:
    """Canonical simplex identifier: strictly increasing ball indices."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        verts = tuple(int(v) for v in self.vertices)
        if not 1 <= len(verts) <= 4:
            raise ValueError("a simplex has 1 to 4 vertices")
        if any(v < 0 for v in verts):
            raise ValueError("vertex indices must be non-negative")
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise ValueError(f"vertices must be strictly increasing, got {verts}")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def of(cls, *indices: int) -> "SimplexKey":
        return cls(tuple(sorted(int(i) for i in indices)))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.dim, self.vertices)

    def facets(self) -> Iterator["SimplexKey"]:
        if self.dim == 0:
            return
        for drop in range(len(self.vertices)):
            yield SimplexKey(self.vertices[:drop] + self.vertices[drop + 1:])


def simplex_compare(a: SimplexKey, b: SimplexKey) -> int:
    """Total order: dimension ascending, then lexicographic on vertices."""
    ka, kb = a.sort_key(), b.sort_key()
    return -1 if ka < kb else (1 if ka > kb else 0)


@dataclass(frozen=True)
class OrthoResult:
    """Equal-power point of a simplex and its power distance value (A^2)."""

    center: tuple[float, float, float]
    ortho_size: float


def power_distance(p: Sequence[float], ball: Ball) -> float:
    """pi(p, b) = |p - center|^2 - radius^2."""
    dx = p[0] - ball.center[0]
    dy = p[1] - ball.center[1]
    dz = p[2] - ball.center[2]
    return ((dx * dx + dy * dy) + dz * dz) - ball.radius * ball.radius


def solve_partial_pivot(a: np.ndarray, b: np.ndarray, eps_singular: float):
    """Solve a batch of d x d systems by Gaussian elimination with partial
    pivoting (d <= 3 in practice).

    a: (m, d, d), b: (m, d). Returns (x, singular) where `singular` flags
    batch entries whose pivot magnitude fell to eps_singular or below; the
    corresponding rows of x are meaningless.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    b = np.array(b, dtype=np.float64, copy=True)
    m, d = b.shape
    rows = np.arange(m)
    singular = np.zeros(m, dtype=bool)
    for col in range(d):
        piv = np.abs(a[:, col:, col]).argmax(axis=1) + col
        # swap row `col` with the pivot row, per batch entry
        tmp = a[rows, piv].copy()
        a[rows, piv] = a[:, col]
        a[:, col] = tmp
        tmpb = b[rows, piv].copy()
        b[rows, piv] = b[:, col]
        b[:, col] = tmpb
        pivval = a[:, col, col]
        bad = np.abs(pivval) <= eps_singular
        singular |= bad
        safe = np.where(bad, 1.0, pivval)
        for r in range(col + 1, d):
            factor = a[:, r, col] / safe
            a[:, r, col:] = a[:, r, col:] - factor[:, None] * a[:, col, col:]
            b[:, r] = b[:, r] - factor * b[:, col]
    x = np.zeros_like(b)
    for r in range(d - 1, -1, -1):
        acc = b[:, r]
        for c in range(r + 1, d):
            acc = acc - a[:, r, c] * x[:, c]
        x[:, r] = acc / np.where(singular, 1.0, a[:, r, r])
    return x, singular


def ortho_center_batch(points: np.ndarray, r2: np.ndarray, eps_singular: float):
    """Ortho-centers and ortho-sizes for a batch of simplices.

    points: (m, k, 3) ball centers, row 0 of each simplex being the
    lowest-index ball; r2: (m, k) squared radii. The equal-power point is
    parametrized inside the affine hull, p = p0 + sum_i lam_i (p_i - p0),
    and the resulting d x d system 2 (p_i - p0) . (p_j - p0) lam_j =
    |p_i - p0|^2 + r0^2 - r_i^2 is solved by partial-pivoted elimination.

    Returns (centers (m, 3), sizes (m,), singular (m,)).
    """
    m, k, _ = points.shape
    if k == 1:
        return points[:, 0, :].copy(), -r2[:, 0], np.zeros(m, dtype=bool)
    diffs = points[:, 1:, :] - points[:, :1, :]
    a = 2.0 * np.matmul(diffs, diffs.transpose(0, 2, 1))
    rhs = (diffs * diffs).sum(axis=2) + r2[:, :1] - r2[:, 1:]
    lam, singular = solve_partial_pivot(a, rhs, eps_singular)
    centers = points[:, 0, :] + (lam[:, :, None] * diffs).sum(axis=1)
    sizes = ((centers - points[:, 0, :]) ** 2).sum(axis=1) - r2[:, 0]
    return centers, sizes, singular


def ortho_center(simplex: Sequence[Ball], tol: TolerancePolicy = DEFAULT_TOLERANCE) -> OrthoResult:
    """Ortho-center and ortho-size of a simplex spanned by 1..4 balls.

    For a single ball the result is (center, -radius^2). The ortho-size is
    evaluated against the lowest-index incident ball; the equal-power
    condition makes the choice immaterial up to tolerance.

    Raises DegenerateSimplex when the centers are affinely dependent.
    """
    balls = sorted(simplex, key=lambda b: b.index)
    if not 1 <= len(balls) <= 4:
        raise ValueError("a simplex is spanned by 1 to 4 balls")
    pts = np.array([[b.center for b in balls]], dtype=np.float64)
    r2 = np.array([[b.radius * b.radius for b in balls]], dtype=np.float64)
    centers, sizes, singular = ortho_center_batch(pts, r2, tol.eps_singular)
    if singular[0]:
        idx = tuple(b.index for b in balls)
        raise DegenerateSimplex(
            f"affinely dependent centers for simplex {idx}", vertices=idx
        )
    cx, cy, cz = centers[0]
    return OrthoResult(center=(float(cx), float(cy), float(cz)), ortho_size=float(sizes[0]))


def ac2_satisfied(
    simplex: SimplexKey,
    p: Sequence[float],
    candidates: Iterable[Ball],
    balls: Sequence[Ball],
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
) -> bool:
    """Closed-inequality domination check at the witness candidate p.

    True iff no candidate ball (balls incident on the simplex are skipped by
    index) is closer to p in power distance than the simplex's lowest-index
    ball, beyond the eps_abs slack. Ties count as satisfied.
    """
    base = power_distance(p, balls[simplex.vertices[0]])
    cutoff = base - tol.eps_abs
    incident = set(simplex.vertices)
    for cand in candidates:
        if cand.index in incident:
            continue
        if power_distance(p, cand) < cutoff:
            return False
    return True
