"""Synthetic biomolecule-like test instances.

Centers are rejection-sampled inside a cube sized for the target density,
with a guaranteed pairwise separation (the contact-distance assumption), and
radii drawn uniformly from a bounded range. Deterministic for a given seed.
"""

from __future__ import annotations

import numpy as np

from .geometry import Ball


def random_instance(
    n: int,
    seed: int,
    min_sep: float = 1.0,
    radius_range: tuple[float, float] = (1.0, 2.0),
    density: float = 0.05,
) -> list[Ball]:
    """n balls in a cube of volume n/density with pairwise center distance
    at least min_sep and radii uniform in radius_range."""
    if n < 1:
        raise ValueError("n must be positive")
    if min_sep <= 0.0:
        raise ValueError("min_sep must be positive")
    lo, hi = radius_range
    if not 0.0 < lo <= hi:
        raise ValueError("radius_range must satisfy 0 < lo <= hi")
    rng = np.random.default_rng(seed)
    side = (n / density) ** (1.0 / 3.0)
    inv = 1.0 / min_sep
    min_sep_sq = min_sep * min_sep
    cells: dict[tuple[int, int, int], list[int]] = {}
    points = np.empty((n, 3), dtype=np.float64)
    placed = 0
    attempts = 0
    max_attempts = 10_000 * n
    while placed < n:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError(
                f"could not place {n} points at density {density} with min_sep {min_sep}"
            )
        p = rng.uniform(0.0, side, size=3)
        cx, cy, cz = (int(v) for v in np.floor(p * inv))
        clash = False
        for dz in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    for idx in cells.get((cx + dx, cy + dy, cz + dz), ()):
                        d = points[idx] - p
                        if (d * d).sum() < min_sep_sq:
                            clash = True
                            break
                    if clash:
                        break
                if clash:
                    break
            if clash:
                break
        if clash:
            continue
        points[placed] = p
        cells.setdefault((cx, cy, cz), []).append(placed)
        placed += 1
    radii = rng.uniform(lo, hi, size=n)
    return [
        Ball(center=tuple(points[i]), radius=float(radii[i]), index=i) for i in range(n)
    ]
