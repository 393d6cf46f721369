"""Exhaustive reference construction of the alpha complex.

Intended as ground truth at desk scale: no grid, no locality assumptions.
Every pair and every triple of balls is enumerated outright; tetrahedra are
the extensions of the surviving triangles by every larger ball index (the
ortho-size of a simplex never falls below that of its faces, so nothing is
lost). Domination checks run against the full ball set. Also provides the
witness-minimizing size of a single simplex via the cofacet recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._arrays import empty_rows, faces_of, rows_in, unique_rows
from .errors import AlphaxError
from .geometry import (
    DEFAULT_TOLERANCE,
    Ball,
    SimplexKey,
    TolerancePolicy,
    ac2_satisfied,
    ortho_center,
)
from .pipeline import (
    AlphaComplex,
    _raise_if_singular,
    _simplex_orthos,
    closure_ok,
    validate_input,
)


@dataclass(frozen=True)
class SizeResult:
    """Minimal witness power distance of a simplex; infinite when the simplex
    is not part of the weighted Delaunay triangulation."""

    size: float
    witness: tuple[float, float, float] | None


@lru_cache(maxsize=8)
def _pair_rows(n: int) -> np.ndarray:
    i, j = np.triu_indices(n, 1)
    return np.stack([i, j], axis=1).astype(np.int64)


def _extensions_above(rows: np.ndarray, n: int) -> np.ndarray:
    """Extend every sorted row by each strictly larger index."""
    k = rows.shape[1]
    starts = rows[:, -1] + 1
    reps = n - starts
    keep = reps > 0
    rows, starts, reps = rows[keep], starts[keep], reps[keep]
    total = int(reps.sum())
    if total == 0:
        return empty_rows(k + 1)
    cum = np.r_[0, np.cumsum(reps)[:-1]]
    last = np.arange(total) - np.repeat(cum, reps) + np.repeat(starts, reps)
    return np.concatenate([np.repeat(rows, reps, axis=0), last[:, None]], axis=1)


def _ac2_all(centers, r2, rows, pts, sizes, eps_abs, batch=2048):
    """Domination check against every ball (incident ones excluded)."""
    m = rows.shape[0]
    ok = np.ones(m, dtype=bool)
    g = np.arange(batch)
    for s in range(0, m, batch):
        e = min(s + batch, m)
        diffs = centers[None, :, :] - pts[s:e][:, None, :]
        dpow = (diffs * diffs).sum(axis=2) - r2[None, :]
        dpow[g[: e - s][:, None], rows[s:e]] = np.inf
        ok[s:e] = dpow.min(axis=1) >= sizes[s:e] - eps_abs
    return ok


def naive_alpha_complex(
    balls: Sequence[Ball],
    alpha: float,
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    biomolecule_mode: bool = False,
) -> AlphaComplex:
    """Alpha complex by full enumeration, O(n^2) pairs and O(n^3) triples.

    Practical up to a few hundred balls. The vertex step inserts endpoints
    of kept edges and any remaining ball that is undominated at its own
    center (all vertices, in biomolecule mode).
    """
    centers, radii = validate_input(balls)
    r2 = radii * radii
    n = len(balls)
    eps = tol.eps_abs
    cut = alpha + eps

    pairs = _pair_rows(n)
    p_cents, p_sizes, p_sing = _simplex_orthos(centers, r2, pairs, tol.eps_singular)
    _raise_if_singular(p_sing, pairs, "edge")
    keep = p_sizes <= cut
    edges, e_cents, e_sizes = pairs[keep], p_cents[keep], p_sizes[keep]

    triples = _extensions_above(pairs, n)
    t_cents, t_sizes, t_sing = _simplex_orthos(centers, r2, triples, tol.eps_singular)
    _raise_if_singular(t_sing, triples, "triangle")
    keep = t_sizes <= cut
    tris, tri_cents, tri_sizes = triples[keep], t_cents[keep], t_sizes[keep]

    quads = _extensions_above(tris, n)
    q_cents, q_sizes, q_sing = _simplex_orthos(centers, r2, quads, tol.eps_singular)
    _raise_if_singular(q_sing, quads, "tetrahedron")
    keep = q_sizes <= cut
    tets, tet_cents, tet_sizes = quads[keep], q_cents[keep], q_sizes[keep]

    k3 = tets[_ac2_all(centers, r2, tets, tet_cents, tet_sizes, eps)]

    tri_faces = unique_rows(faces_of(k3)) if k3.size else empty_rows(3)
    free = ~rows_in(tris, tri_faces)
    tri_ok = _ac2_all(centers, r2, tris[free], tri_cents[free], tri_sizes[free], eps)
    k2 = unique_rows(np.concatenate([tri_faces, tris[free][tri_ok]], axis=0))

    edge_faces = unique_rows(faces_of(k2)) if k2.size else empty_rows(2)
    free = ~rows_in(edges, edge_faces)
    edge_ok = _ac2_all(centers, r2, edges[free], e_cents[free], e_sizes[free], eps)
    k1 = unique_rows(np.concatenate([edge_faces, edges[free][edge_ok]], axis=0))

    if biomolecule_mode:
        k0 = np.arange(n, dtype=np.int64)
    else:
        ids = np.arange(n, dtype=np.int64)
        viable = ids[-r2 <= cut]
        endpoints = np.unique(k1) if k1.size else np.empty(0, dtype=np.int64)
        free0 = viable[~np.isin(viable, endpoints)]
        v_ok = _ac2_all(centers, r2, free0[:, None], centers[free0], -r2[free0], eps)
        k0 = np.unique(np.concatenate([endpoints, free0[v_ok]]))

    result = AlphaComplex(
        vertices=k0, edges=k1, triangles=k2, tets=k3,
        alpha=float(alpha), ball_count=n,
    )
    if not closure_ok(result):
        raise AlphaxError("internal error: oracle output violates closure")
    return result


def simplex_size(
    simplex: SimplexKey,
    balls: Sequence[Ball],
    tol: TolerancePolicy = DEFAULT_TOLERANCE,
    _memo: dict | None = None,
) -> SizeResult:
    """Minimal power distance over all witnesses of a simplex.

    When the ortho-center is undominated it is the closest witness and the
    size equals the ortho-size. Otherwise the closest witness coincides with
    that of some cofacet, so the size is the minimum over all one-ball
    extensions; a dominated tetrahedron has no witness at all (infinite
    size, not in the weighted Delaunay triangulation).
    """
    if _memo is None:
        _memo = {}
    key = simplex.vertices
    cached = _memo.get(key)
    if cached is not None:
        return cached
    ortho = ortho_center([balls[v] for v in key], tol)
    if ac2_satisfied(simplex, ortho.center, balls, balls, tol):
        result = SizeResult(size=ortho.ortho_size, witness=ortho.center)
    elif simplex.dim == 3:
        result = SizeResult(size=math.inf, witness=None)
    else:
        result = SizeResult(size=math.inf, witness=None)
        for j in range(len(balls)):
            if j in key:
                continue
            sub = simplex_size(SimplexKey.of(*key, j), balls, tol, _memo)
            if sub.size < result.size:
                result = sub
    _memo[key] = result
    return result
