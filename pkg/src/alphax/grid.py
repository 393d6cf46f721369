"""Uniform spatial binning of ball centers.

The cell side is sqrt(r_max^2 + alpha): any simplex whose ortho-size is at
most alpha has every incident center within one cell side of the ortho-center,
and any ball able to dominate such an ortho-center lies strictly within one
cell side of it. Cells are half-open, keys are linearized row-major with x
fastest, empty cells are not materialized: balls are stored as one permutation
sorted by (cell key, ball index) plus per-cell ranges into it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import EmptyInput, NonFiniteCoordinate
from .geometry import Ball


class CellKey(NamedTuple):
    ix: int
    iy: int
    iz: int


@dataclass(frozen=True, eq=False)
class Grid:
    origin: np.ndarray            # (3,) min corner of the bounding box
    cell_side: float
    dims: tuple[int, int, int]
    order: np.ndarray             # (n,) ball indices sorted by (cell key, index)
    rank: np.ndarray              # (n,) inverse of order
    ball_cells: np.ndarray        # (n,) linear cell key per ball (input order)
    occupied_keys: np.ndarray     # (c,) ascending linear keys of occupied cells
    range_offsets: np.ndarray     # (c+1,) offsets into order per occupied cell

    @property
    def ball_count(self) -> int:
        return self.order.size

    def linearize(self, key: CellKey) -> int:
        return key.ix + self.dims[0] * (key.iy + self.dims[1] * key.iz)

    def delinearize(self, linear: int) -> CellKey:
        ix = linear % self.dims[0]
        rest = linear // self.dims[0]
        return CellKey(int(ix), int(rest % self.dims[1]), int(rest // self.dims[1]))

    @cached_property
    def cell_ranges(self) -> dict[CellKey, tuple[int, int]]:
        """Occupied cell key -> contiguous [start, end) range in `order`."""
        out = {}
        for i, linear in enumerate(self.occupied_keys):
            out[self.delinearize(int(linear))] = (
                int(self.range_offsets[i]),
                int(self.range_offsets[i + 1]),
            )
        return out

    def cell_of_array(self, points: np.ndarray) -> np.ndarray:
        """Clamped per-axis cell coordinates for points of shape (m, 3)."""
        idx = np.floor((points - self.origin[None, :]) / self.cell_side).astype(np.int64)
        return np.clip(idx, 0, np.asarray(self.dims, dtype=np.int64)[None, :] - 1)

    def neighbor_indices(self, key: CellKey, radius_cells: int) -> np.ndarray:
        """Ball indices in the (2r+1)^3 cell block around key, in ascending
        (cell key, ball index) order."""
        xs = np.arange(max(0, key.ix - radius_cells), min(self.dims[0], key.ix + radius_cells + 1))
        ys = np.arange(max(0, key.iy - radius_cells), min(self.dims[1], key.iy + radius_cells + 1))
        zs = np.arange(max(0, key.iz - radius_cells), min(self.dims[2], key.iz + radius_cells + 1))
        # ravel order (z, y, x) yields ascending linear keys
        keys = (
            xs[None, None, :]
            + self.dims[0] * (ys[None, :, None] + self.dims[1] * zs[:, None, None])
        ).ravel()
        pos = np.searchsorted(self.occupied_keys, keys)
        pos = np.minimum(pos, self.occupied_keys.size - 1)
        hit = pos[self.occupied_keys[pos] == keys]
        if hit.size == 0:
            return np.empty(0, dtype=np.int64)
        parts = [
            self.order[self.range_offsets[i]:self.range_offsets[i + 1]] for i in hit
        ]
        return parts[0] if len(parts) == 1 else np.concatenate(parts)


def build_grid(balls: Sequence[Ball], alpha: float) -> Grid:
    """Build the uniform grid for a ball set at a given alpha.

    The sort is stable with ball index as tie-break, so the result depends
    only on coordinates and indices, not on input permutation quirks.
    """
    n = len(balls)
    if n == 0:
        raise EmptyInput("cannot build a grid over zero balls")
    centers = np.array([b.center for b in balls], dtype=np.float64)
    radii = np.array([b.radius for b in balls], dtype=np.float64)
    return build_grid_arrays(centers, radii, alpha)


def build_grid_arrays(centers: np.ndarray, radii: np.ndarray, alpha: float) -> Grid:
    n = centers.shape[0]
    if n == 0:
        raise EmptyInput("cannot build a grid over zero balls")
    if not np.isfinite(centers).all():
        bad = int(np.flatnonzero(~np.isfinite(centers).all(axis=1))[0])
        raise NonFiniteCoordinate(f"ball {bad} has a non-finite center")
    r_max = float(radii.max())
    side_sq = r_max * r_max + alpha
    if side_sq <= 0.0:
        raise ValueError(
            f"alpha={alpha} gives non-positive squared cell side (r_max={r_max})"
        )
    side = math.sqrt(side_sq)
    origin = centers.min(axis=0)
    span = centers.max(axis=0) - origin
    dims = tuple(int(d) for d in (np.floor(span / side).astype(np.int64) + 1))
    cell3 = np.clip(
        np.floor((centers - origin[None, :]) / side).astype(np.int64),
        0,
        np.asarray(dims, dtype=np.int64)[None, :] - 1,
    )
    linear = cell3[:, 0] + dims[0] * (cell3[:, 1] + dims[1] * cell3[:, 2])
    order = np.argsort(linear, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    sorted_linear = linear[order]
    change = np.flatnonzero(np.r_[True, sorted_linear[1:] != sorted_linear[:-1]])
    occupied = sorted_linear[change]
    offsets = np.r_[change, n]
    return Grid(
        origin=origin,
        cell_side=side,
        dims=dims,
        order=order.astype(np.int64),
        rank=rank,
        ball_cells=linear.astype(np.int64),
        occupied_keys=occupied.astype(np.int64),
        range_offsets=offsets.astype(np.int64),
    )


def cell_of(grid: Grid, p: Sequence[float]) -> CellKey:
    """Cell containing p: per-axis floor((p - origin)/side), clamped into
    [0, dims). Cells are half-open, so a point on a boundary belongs to the
    higher cell."""
    idx = np.floor((np.asarray(p, dtype=np.float64) - grid.origin) / grid.cell_side)
    idx = np.clip(idx, 0, np.asarray(grid.dims) - 1)
    return CellKey(int(idx[0]), int(idx[1]), int(idx[2]))


def neighborhood(grid: Grid, key: CellKey, radius_cells: int) -> Iterator[int]:
    """Yield every ball whose cell differs from key by at most radius_cells
    on each axis, ascending by (cell key, ball index), no duplicates."""
    if radius_cells not in (1, 2):
        raise ValueError("radius_cells must be 1 or 2")
    for idx in grid.neighbor_indices(key, radius_cells):
        yield int(idx)
