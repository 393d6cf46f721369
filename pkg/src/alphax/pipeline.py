"""Two-stage alpha complex construction over a uniform grid.

Stage one enumerates potential simplices bottom-up: edges from grid
neighborhoods, triangles from shared edge partners, tetrahedra by extending
triangles; a simplex is potential when its ortho-size is at most alpha (plus
slack). Stage two prunes top-down: a potential tetrahedron survives when no
ball dominates its ortho-center, faces of survivors are inherited, and the
remaining free triangles/edges/vertices survive their own domination check.

Work is split into contiguous chunks of the grid-sorted ball order. A simplex
is owned by the chunk holding its minimum-rank ball (rank = position in the
grid order), so every simplex is produced by exactly one chunk and the merge
is a plain sorted union. Per-element arithmetic is identical for every chunk
size and worker count, which makes the output byte-stable across
configurations.
"""

from __future__ import annotations

import os
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from ._arrays import empty_rows, faces_of, lexsort_rows, rows_in, unique_rows
from .errors import AlphaxError, DegenerateSimplex, DuplicateCenter, EmptyInput, NonFiniteCoordinate
from .geometry import (
    Ball,
    OrthoResult,
    SimplexKey,
    TolerancePolicy,
    ortho_center_batch,
)
from .grid import Grid, build_grid_arrays

_BATCH = 1 << 18
_AC2_GROUP_CAP = 2048

STAGE_NAMES = (
    "grid",
    "potential_edges",
    "potential_triangles",
    "potential_tets",
    "prune_tets",
    "prune_triangles",
    "prune_edges",
    "io",
)


@dataclass(frozen=True)
class PipelineConfig:
    """Run configuration.

    alpha is the filtration threshold in power-distance units (A^2).
    chunk_size None means a single chunk over the whole input. In
    biomolecule mode every vertex is inserted without a domination check,
    which is only valid for non-negative alpha and inputs whose weighted
    Voronoi regions are all non-empty.
    """

    alpha: float
    mode: str = "grid"
    chunk_size: int | None = None
    workers: int = 1
    biomolecule_mode: bool = False
    tolerance: TolerancePolicy = field(default_factory=TolerancePolicy)

    def __post_init__(self):
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if self.mode not in ("grid", "naive"):
            raise ValueError(f"mode must be 'grid' or 'naive', got {self.mode!r}")
        if self.chunk_size is not None and self.chunk_size < 1:
            raise ValueError("chunk_size must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.biomolecule_mode and self.alpha < 0.0:
            raise ValueError("biomolecule_mode requires alpha >= 0")


@dataclass(frozen=True, eq=False)
class PotentialLevel:
    """Potential simplices of one dimension with cached ortho data.

    simplices: (m, k) int64 rows, lexicographically sorted; centers (m, 3)
    and sizes (m,) are the cached ortho-centers and ortho-sizes.
    """

    simplices: np.ndarray
    centers: np.ndarray
    sizes: np.ndarray

    def __len__(self) -> int:
        return self.simplices.shape[0]

    def items(self) -> Iterator[tuple[SimplexKey, OrthoResult]]:
        for row, center, size in zip(self.simplices, self.centers, self.sizes):
            yield (
                SimplexKey(tuple(int(v) for v in row)),
                OrthoResult(center=tuple(float(c) for c in center), ortho_size=float(size)),
            )


@dataclass(frozen=True, eq=False)
class PotentialSets:
    edges: PotentialLevel
    triangles: PotentialLevel
    tets: PotentialLevel
    alpha: float


@dataclass(frozen=True, eq=False)
class AlphaComplex:
    """Alpha complex as per-dimension sorted index arrays.

    vertices: (k0,) ascending; edges/triangles/tets: (k, d+1) rows with
    strictly increasing vertices, lexicographically sorted, duplicate-free.
    """

    vertices: np.ndarray
    edges: np.ndarray
    triangles: np.ndarray
    tets: np.ndarray
    alpha: float
    ball_count: int

    @classmethod
    def from_rows(cls, vertices, edges, triangles, tets, alpha, ball_count) -> "AlphaComplex":
        return cls(
            vertices=np.unique(np.asarray(vertices, dtype=np.int64)),
            edges=unique_rows(np.asarray(edges, dtype=np.int64).reshape(-1, 2)),
            triangles=unique_rows(np.asarray(triangles, dtype=np.int64).reshape(-1, 3)),
            tets=unique_rows(np.asarray(tets, dtype=np.int64).reshape(-1, 4)),
            alpha=float(alpha),
            ball_count=int(ball_count),
        )

    def level(self, dim: int) -> np.ndarray:
        return (self.vertices.reshape(-1, 1), self.edges, self.triangles, self.tets)[dim]

    def counts(self) -> tuple[int, int, int, int]:
        return (
            int(self.vertices.shape[0]),
            int(self.edges.shape[0]),
            int(self.triangles.shape[0]),
            int(self.tets.shape[0]),
        )

    @property
    def total(self) -> int:
        return sum(self.counts())

    def simplex_keys(self, dim: int) -> list[SimplexKey]:
        return [SimplexKey(tuple(int(v) for v in row)) for row in self.level(dim)]

    def iter_simplices(self) -> Iterator[SimplexKey]:
        for dim in range(4):
            yield from self.simplex_keys(dim)

    def contains(self, key: SimplexKey) -> bool:
        row = np.asarray([key.vertices], dtype=np.int64)
        return bool(rows_in(row, self.level(key.dim))[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlphaComplex):
            return NotImplemented
        return (
            self.ball_count == other.ball_count
            and self.alpha == other.alpha
            and all(np.array_equal(self.level(d), other.level(d)) for d in range(4))
        )

    def symmetric_difference(self, other: "AlphaComplex") -> dict[int, tuple[np.ndarray, np.ndarray]]:
        """Per dimension: (rows only in self, rows only in other)."""
        out = {}
        for dim in range(4):
            a, b = self.level(dim), other.level(dim)
            out[dim] = (a[~rows_in(a, b)], b[~rows_in(b, a)])
        return out

    def is_subcomplex_of(self, other: "AlphaComplex") -> bool:
        return all(bool(rows_in(self.level(d), other.level(d)).all()) for d in range(4))


@dataclass(frozen=True)
class ComplexStats:
    counts: tuple[int, int, int, int]
    total: int
    euler: int


def complex_stats(k: AlphaComplex) -> ComplexStats:
    """Per-dimension counts, total, and Euler characteristic V - E + F - T."""
    c = k.counts()
    return ComplexStats(counts=c, total=sum(c), euler=c[0] - c[1] + c[2] - c[3])


def closure_ok(k: AlphaComplex) -> bool:
    """Every facet of every simplex is itself a member."""
    if k.tets.size and not rows_in(unique_rows(faces_of(k.tets)), k.triangles).all():
        return False
    if k.triangles.size and not rows_in(unique_rows(faces_of(k.triangles)), k.edges).all():
        return False
    if k.edges.size and not np.isin(np.unique(k.edges), k.vertices).all():
        return False
    return True


# ---------------------------------------------------------------------------
# internal helpers


def as_ball_arrays(balls: Sequence[Ball]) -> tuple[np.ndarray, np.ndarray]:
    centers = np.array([b.center for b in balls], dtype=np.float64).reshape(-1, 3)
    radii = np.array([b.radius for b in balls], dtype=np.float64)
    return centers, radii


def validate_input(balls: Sequence[Ball]) -> tuple[np.ndarray, np.ndarray]:
    """Reject empty, non-finite, duplicate-center, or mis-indexed inputs."""
    if len(balls) == 0:
        raise EmptyInput("at least one ball is required")
    for position, ball in enumerate(balls):
        if ball.index != position:
            raise ValueError(
                f"ball at position {position} carries index {ball.index}; "
                "indices must be the stable input ordinals"
            )
    centers, radii = as_ball_arrays(balls)
    finite = np.isfinite(centers).all(axis=1) & np.isfinite(radii)
    if not finite.all():
        raise NonFiniteCoordinate(f"ball {int(np.flatnonzero(~finite)[0])} is not finite")
    sorter = np.lexsort((centers[:, 2], centers[:, 1], centers[:, 0]))
    eq = (centers[sorter[1:]] == centers[sorter[:-1]]).all(axis=1)
    if eq.any():
        at = int(np.flatnonzero(eq)[0])
        i, j = sorted((int(sorter[at]), int(sorter[at + 1])))
        where = tuple(float(c) for c in centers[i])
        raise DuplicateCenter(f"balls {i} and {j} share the center {where}")
    return centers, radii


def _simplex_orthos(centers, r2, rows, eps_singular):
    """Batched ortho-centers/sizes for index rows (m, k); micro-batched."""
    m = rows.shape[0]
    cents = np.empty((m, 3), dtype=np.float64)
    sizes = np.empty(m, dtype=np.float64)
    singular = np.zeros(m, dtype=bool)
    for s in range(0, m, _BATCH):
        e = min(s + _BATCH, m)
        c, z, g = ortho_center_batch(centers[rows[s:e]], r2[rows[s:e]], eps_singular)
        cents[s:e] = c
        sizes[s:e] = z
        singular[s:e] = g
    return cents, sizes, singular


def _raise_if_singular(singular, rows, what):
    if singular.any():
        bad = tuple(int(v) for v in rows[int(np.flatnonzero(singular)[0])])
        raise DegenerateSimplex(f"{what} {bad} has affinely dependent centers", vertices=bad)


class _NeighborCache:
    """Per-run cache of concatenated neighbor index arrays, keyed by
    (linear cell key, radius)."""

    def __init__(self, grid: Grid):
        self.grid = grid
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def get(self, linear: int, radius: int) -> np.ndarray:
        key = (linear, radius)
        hit = self._cache.get(key)
        if hit is None:
            hit = self.grid.neighbor_indices(self.grid.delinearize(linear), radius)
            self._cache[key] = hit
        return hit


def _ac2_mask(centers, r2, grid, nbcache, rows, pts, sizes, eps_abs):
    """Domination check per simplex at its ortho-center, candidates taken
    from the radius-1 cell neighborhood (sufficient: a dominating ball lies
    strictly within one cell side of the ortho-center)."""
    m = rows.shape[0]
    ok = np.ones(m, dtype=bool)
    if m == 0:
        return ok
    cell3 = grid.cell_of_array(pts)
    lin = cell3[:, 0] + grid.dims[0] * (cell3[:, 1] + grid.dims[1] * cell3[:, 2])
    sorter = np.argsort(lin, kind="stable")
    lin_s = lin[sorter]
    starts = np.flatnonzero(np.r_[True, lin_s[1:] != lin_s[:-1]])
    ends = np.r_[starts[1:], m]
    for gs, ge in zip(starts, ends):
        nb = nbcache.get(int(lin_s[gs]), 1)
        if nb.size == 0:
            continue
        nb_centers = centers[nb]
        nb_r2 = r2[nb]
        for ss in range(gs, ge, _AC2_GROUP_CAP):
            idx = sorter[ss:min(ss + _AC2_GROUP_CAP, ge)]
            diffs = nb_centers[None, :, :] - pts[idx][:, None, :]
            dpow = (diffs * diffs).sum(axis=2) - nb_r2[None, :]
            incident = (nb[None, None, :] == rows[idx][:, :, None]).any(axis=1)
            dpow = np.where(incident, np.inf, dpow)
            ok[idx] = dpow.min(axis=1) >= sizes[idx] - eps_abs
    return ok


def _chunk_potential_edges(centers, r2, grid, alpha, tol, lo, hi, nbcache):
    """Potential edges owned by grid-rank range [lo, hi): generated from the
    lower-rank endpoint over its radius-2 neighborhood. A qualifying edge has
    each endpoint within one cell side of the shared ortho-center, so the
    endpoints can sit up to two cells apart on an axis."""
    order, rank = grid.order, grid.rank
    lim = r2 + alpha + tol.eps_abs
    viable = lim >= 0.0
    reach = np.sqrt(np.maximum(lim, 0.0))
    gen_parts: list[np.ndarray] = []
    par_parts: list[np.ndarray] = []
    offsets = grid.range_offsets
    ci = int(np.searchsorted(offsets, lo, side="right") - 1)
    while ci < grid.occupied_keys.size and offsets[ci] < hi:
        a = max(int(offsets[ci]), lo)
        b = min(int(offsets[ci + 1]), hi)
        nb = nbcache.get(int(grid.occupied_keys[ci]), 2)
        nb_rank = rank[nb]
        for t in range(a, b):
            u = int(order[t])
            if not viable[u]:
                continue
            sel = nb[nb_rank > t]
            if sel.size == 0:
                continue
            diff = centers[sel] - centers[u]
            d2 = (diff * diff).sum(axis=1)
            lims = reach[u] + reach[sel]
            good = (d2 <= lims * lims) & viable[sel]
            if good.any():
                vs = sel[good]
                gen_parts.append(np.full(vs.size, u, dtype=np.int64))
                par_parts.append(vs)
        ci += 1
    if not gen_parts:
        z = np.empty(0, dtype=np.int64)
        return empty_rows(2), np.empty((0, 3)), np.empty(0), z, z
    gen = np.concatenate(gen_parts)
    par = np.concatenate(par_parts)
    pairs = np.sort(np.stack([gen, par], axis=1), axis=1)
    cents, sizes, singular = _simplex_orthos(centers, r2, pairs, tol.eps_singular)
    _raise_if_singular(singular, pairs, "edge")
    keep = sizes <= alpha + tol.eps_abs
    return pairs[keep], cents[keep], sizes[keep], gen[keep], par[keep]


def _adjacency_groups(rank, gen, par):
    """Sort kept edges by (rank of generator, rank of partner) and return the
    per-generator group boundaries."""
    sorter = np.lexsort((rank[par], rank[gen]))
    g = gen[sorter]
    p = par[sorter]
    starts = np.flatnonzero(np.r_[True, g[1:] != g[:-1]])
    ends = np.r_[starts[1:], g.size]
    return g, p, starts, ends


def _chunk_potential_triangles(centers, r2, grid, alpha, tol, gen, par):
    """Potential triangles generated from their minimum-rank vertex: pairs of
    its edge partners whose connecting pair is itself a potential edge."""
    rank = grid.rank
    empty = (empty_rows(3), np.empty((0, 3)), np.empty(0),
             np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64),
             np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    if gen.size == 0:
        return empty
    lim = r2 + alpha + tol.eps_abs
    reach = np.sqrt(np.maximum(lim, 0.0))
    g, p, starts, ends = _adjacency_groups(rank, gen, par)
    triu_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    cu, cv, cw = [], [], []
    for s, e in zip(starts, ends):
        k = e - s
        if k < 2:
            continue
        pair = triu_cache.get(k)
        if pair is None:
            pair = np.triu_indices(k, 1)
            triu_cache[k] = pair
        ps = p[s:e]
        v = ps[pair[0]]
        w = ps[pair[1]]
        diff = centers[v] - centers[w]
        d2 = (diff * diff).sum(axis=1)
        lims = reach[v] + reach[w]
        good = d2 <= lims * lims
        if good.any():
            cu.append(np.full(int(good.sum()), g[s], dtype=np.int64))
            cv.append(v[good])
            cw.append(w[good])
    if not cu:
        return empty
    u = np.concatenate(cu)
    v = np.concatenate(cv)
    w = np.concatenate(cw)
    # the partner pair must itself be a potential edge
    vw = np.sort(np.stack([v, w], axis=1), axis=1)
    _, vw_sizes, vw_singular = _simplex_orthos(centers, r2, vw, tol.eps_singular)
    _raise_if_singular(vw_singular, vw, "edge")
    ok = vw_sizes <= alpha + tol.eps_abs
    u, v, w = u[ok], v[ok], w[ok]
    rows = np.sort(np.stack([u, v, w], axis=1), axis=1)
    cents, sizes, singular = _simplex_orthos(centers, r2, rows, tol.eps_singular)
    _raise_if_singular(singular, rows, "triangle")
    keep = sizes <= alpha + tol.eps_abs
    rank_hi = np.maximum(rank[v], rank[w])
    return (rows[keep], cents[keep], sizes[keep],
            u[keep], v[keep], w[keep], rank_hi[keep])


def _chunk_potential_tets(centers, r2, grid, alpha, tol, gen, par,
                          tri_u, tri_v, tri_w, tri_hi):
    """Potential tetrahedra: each triangle (taken as the face with the three
    smallest ranks) extended by a higher-rank edge partner of its generator."""
    rank = grid.rank
    if tri_u.size == 0 or gen.size == 0:
        return empty_rows(4), np.empty((0, 3)), np.empty(0)
    lim = r2 + alpha + tol.eps_abs
    reach = np.sqrt(np.maximum(lim, 0.0))
    g, p, starts, ends = _adjacency_groups(rank, gen, par)
    adj = {int(g[s]): p[s:e] for s, e in zip(starts, ends)}
    tri_sorter = np.argsort(rank[tri_u], kind="stable")
    tu = tri_u[tri_sorter]
    gstarts = np.flatnonzero(np.r_[True, tu[1:] != tu[:-1]])
    gends = np.r_[gstarts[1:], tu.size]
    ct, cx = [], []
    for s, e in zip(gstarts, gends):
        partners = adj.get(int(tu[s]))
        if partners is None or partners.size == 0:
            continue
        tri_idx = tri_sorter[s:e]
        above = rank[partners][None, :] > tri_hi[tri_idx][:, None]
        ti, xi = np.nonzero(above)
        if ti.size:
            ct.append(tri_idx[ti])
            cx.append(partners[xi])
    if not ct:
        return empty_rows(4), np.empty((0, 3)), np.empty(0)
    t = np.concatenate(ct)
    x = np.concatenate(cx)
    v = tri_v[t]
    w = tri_w[t]
    dv = centers[x] - centers[v]
    dw = centers[x] - centers[w]
    good = ((dv * dv).sum(axis=1) <= (reach[x] + reach[v]) ** 2) & (
        (dw * dw).sum(axis=1) <= (reach[x] + reach[w]) ** 2
    )
    t, x, v, w = t[good], x[good], v[good], w[good]
    if t.size == 0:
        return empty_rows(4), np.empty((0, 3)), np.empty(0)
    # both new edges must be potential
    for other in (v, w):
        pair = np.sort(np.stack([other, x], axis=1), axis=1)
        _, psize, psing = _simplex_orthos(centers, r2, pair, tol.eps_singular)
        _raise_if_singular(psing, pair, "edge")
        ok = psize <= alpha + tol.eps_abs
        t, x, v, w = t[ok], x[ok], v[ok], w[ok]
        if t.size == 0:
            return empty_rows(4), np.empty((0, 3)), np.empty(0)
    rows = np.sort(np.stack([tri_u[t], v, w, x], axis=1), axis=1)
    cents, sizes, singular = _simplex_orthos(centers, r2, rows, tol.eps_singular)
    _raise_if_singular(singular, rows, "tetrahedron")
    keep = sizes <= alpha + tol.eps_abs
    return rows[keep], cents[keep], sizes[keep]


def _prune_levels(centers, r2, grid, cfg, nbcache,
                  edges, edge_centers, edge_sizes,
                  tris, tri_centers, tri_sizes,
                  tets, tet_centers, tet_sizes,
                  vertex_ids, times):
    """Top-down pruning of one potential set (whole input or one chunk).

    Returns the kept simplices per dimension. Tetrahedra keep iff dominated
    by no ball at the ortho-center; faces of keepers are inherited and the
    free remainder of each lower dimension keeps iff it passes its own check.
    """
    alpha, eps = cfg.alpha, cfg.tolerance.eps_abs

    t0 = time.perf_counter()
    tet_ok = _ac2_mask(centers, r2, grid, nbcache, tets, tet_centers, tet_sizes, eps)
    k3 = tets[tet_ok]
    times["prune_tets"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    tri_faces = unique_rows(faces_of(k3)) if k3.size else empty_rows(3)
    free = ~rows_in(tris, tri_faces)
    tri_ok = _ac2_mask(centers, r2, grid, nbcache,
                       tris[free], tri_centers[free], tri_sizes[free], eps)
    k2 = unique_rows(np.concatenate([tri_faces, tris[free][tri_ok]], axis=0))
    times["prune_triangles"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    edge_faces = unique_rows(faces_of(k2)) if k2.size else empty_rows(2)
    free = ~rows_in(edges, edge_faces)
    edge_ok = _ac2_mask(centers, r2, grid, nbcache,
                        edges[free], edge_centers[free], edge_sizes[free], eps)
    k1 = unique_rows(np.concatenate([edge_faces, edges[free][edge_ok]], axis=0))
    times["prune_edges"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    if cfg.biomolecule_mode:
        k0 = np.sort(vertex_ids)
    else:
        viable = vertex_ids[-r2[vertex_ids] <= alpha + eps]
        endpoints = np.unique(k1) if k1.size else np.empty(0, dtype=np.int64)
        free0 = viable[~np.isin(viable, endpoints)]
        v_ok = _ac2_mask(centers, r2, grid, nbcache,
                         free0[:, None], centers[free0], -r2[free0], eps)
        k0 = np.unique(np.concatenate([endpoints, free0[v_ok]]))
    times["prune_vertices"] += time.perf_counter() - t0
    return k0, k1, k2, k3


def _chunk_pass(centers, r2, grid, cfg, lo, hi):
    """Compute the alpha complex simplices owned by rank range [lo, hi)."""
    times: dict[str, float] = defaultdict(float)
    nbcache = _NeighborCache(grid)
    alpha, tol = cfg.alpha, cfg.tolerance

    t0 = time.perf_counter()
    edges, e_cents, e_sizes, gen, par = _chunk_potential_edges(
        centers, r2, grid, alpha, tol, lo, hi, nbcache)
    times["potential_edges"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    tris, t_cents, t_sizes, tri_u, tri_v, tri_w, tri_hi = _chunk_potential_triangles(
        centers, r2, grid, alpha, tol, gen, par)
    times["potential_triangles"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    tets, q_cents, q_sizes = _chunk_potential_tets(
        centers, r2, grid, alpha, tol, gen, par, tri_u, tri_v, tri_w, tri_hi)
    times["potential_tets"] += time.perf_counter() - t0

    k0, k1, k2, k3 = _prune_levels(
        centers, r2, grid, cfg, nbcache,
        edges, e_cents, e_sizes, tris, t_cents, t_sizes, tets, q_cents, q_sizes,
        vertex_ids=grid.order[lo:hi].copy(), times=times)
    return k0, k1, k2, k3, dict(times)


_POOL_STATE = None


def _pool_init(centers, r2, grid, cfg):
    global _POOL_STATE
    _POOL_STATE = (centers, r2, grid, cfg)


def _pool_chunk(chunk_range):
    centers, r2, grid, cfg = _POOL_STATE
    return _chunk_pass(centers, r2, grid, cfg, chunk_range[0], chunk_range[1])


def compute_alpha_complex(
    balls: Sequence[Ball],
    cfg: PipelineConfig,
    stage_times: dict | None = None,
) -> AlphaComplex:
    """Compute the alpha complex of a ball set.

    mode "grid" runs the two-stage grid pipeline, chunked over the
    grid-sorted order when cfg.chunk_size is set; mode "naive" delegates to
    the exhaustive reference implementation. The result is canonical and
    identical for any worker count and chunk size.
    """
    centers, radii = validate_input(balls)
    if cfg.mode == "naive":
        from .oracle import naive_alpha_complex

        return naive_alpha_complex(
            balls, cfg.alpha, tol=cfg.tolerance, biomolecule_mode=cfg.biomolecule_mode
        )
    r2 = radii * radii
    times: dict[str, float] = defaultdict(float)

    t0 = time.perf_counter()
    grid = build_grid_arrays(centers, radii, cfg.alpha)
    times["grid"] += time.perf_counter() - t0

    n = centers.shape[0]
    chunk = cfg.chunk_size if cfg.chunk_size is not None else n
    ranges = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
    if cfg.workers == 1 or len(ranges) == 1:
        parts = [_chunk_pass(centers, r2, grid, cfg, lo, hi) for lo, hi in ranges]
    else:
        workers = min(cfg.workers, len(ranges))
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_pool_init,
            initargs=(centers, r2, grid, cfg),
        ) as pool:
            parts = list(pool.map(_pool_chunk, ranges))

    k0 = np.unique(np.concatenate([p[0] for p in parts]))
    k1 = unique_rows(np.concatenate([p[1] for p in parts], axis=0))
    k2 = unique_rows(np.concatenate([p[2] for p in parts], axis=0))
    k3 = unique_rows(np.concatenate([p[3] for p in parts], axis=0))
    for p in parts:
        for name, dt in p[4].items():
            times[name] += dt

    result = AlphaComplex(
        vertices=k0, edges=k1, triangles=k2, tets=k3,
        alpha=cfg.alpha, ball_count=n,
    )
    if not closure_ok(result):
        raise AlphaxError("internal error: output violates closure")
    if stage_times is not None:
        for name, dt in times.items():
            stage_times[name] = stage_times.get(name, 0.0) + dt
    return result


# ---------------------------------------------------------------------------
# standalone stage operations (whole-input views of the chunk kernels)


def _sorted_level(rows, cents, sizes) -> PotentialLevel:
    perm = lexsort_rows(rows)
    return PotentialLevel(simplices=rows[perm], centers=cents[perm], sizes=sizes[perm])


def potential_edges(grid: Grid, balls: Sequence[Ball], cfg: PipelineConfig) -> PotentialLevel:
    """All edges (i, j), i < j, whose ortho-size is at most alpha + slack."""
    centers, radii = as_ball_arrays(balls)
    rows, cents, sizes, _, _ = _chunk_potential_edges(
        centers, radii * radii, grid, cfg.alpha, cfg.tolerance,
        0, grid.ball_count, _NeighborCache(grid))
    return _sorted_level(rows, cents, sizes)


def _edge_generators(grid: Grid, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split sorted edge rows back into (lower-rank endpoint, other)."""
    rank = grid.rank
    first_lower = rank[rows[:, 0]] < rank[rows[:, 1]]
    gen = np.where(first_lower, rows[:, 0], rows[:, 1])
    par = np.where(first_lower, rows[:, 1], rows[:, 0])
    return gen, par


def potential_triangles(
    edges: PotentialLevel, grid: Grid, balls: Sequence[Ball], cfg: PipelineConfig
) -> PotentialLevel:
    """All triangles whose three edges are potential and whose own
    ortho-size is at most alpha + slack."""
    centers, radii = as_ball_arrays(balls)
    gen, par = _edge_generators(grid, edges.simplices)
    rows, cents, sizes, *_ = _chunk_potential_triangles(
        centers, radii * radii, grid, cfg.alpha, cfg.tolerance, gen, par)
    return _sorted_level(rows, cents, sizes)


def potential_tets(
    triangles: PotentialLevel, grid: Grid, balls: Sequence[Ball], cfg: PipelineConfig
) -> PotentialLevel:
    """All tetrahedra whose four faces are potential triangles and whose own
    ortho-size is at most alpha + slack. Each tetrahedron is generated once,
    from its lexicographically smallest face extended by the largest index."""
    centers, radii = as_ball_arrays(balls)
    r2 = radii * radii
    tol = cfg.tolerance
    tri_rows = triangles.simplices
    if tri_rows.shape[0] == 0:
        return _sorted_level(empty_rows(4), np.empty((0, 3)), np.empty(0))
    nbcache = _NeighborCache(grid)
    ct, cx = [], []
    for t in range(tri_rows.shape[0]):
        i, j, k = (int(v) for v in tri_rows[t])
        cand = nbcache.get(int(grid.ball_cells[i]), 2)
        cand = cand[cand > k]
        if cand.size:
            ct.append(np.full(cand.size, t, dtype=np.int64))
            cx.append(cand)
    if not ct:
        return _sorted_level(empty_rows(4), np.empty((0, 3)), np.empty(0))
    t = np.concatenate(ct)
    x = np.concatenate(cx)
    # all three new faces must be potential triangles
    base = tri_rows[t]
    ok = np.ones(t.size, dtype=bool)
    for keep_cols in ((0, 1), (0, 2), (1, 2)):
        face = np.sort(
            np.concatenate([base[:, keep_cols], x[:, None]], axis=1), axis=1)
        ok &= rows_in(face, tri_rows)
    t, x = t[ok], x[ok]
    if t.size == 0:
        return _sorted_level(empty_rows(4), np.empty((0, 3)), np.empty(0))
    rows = np.sort(np.concatenate([tri_rows[t], x[:, None]], axis=1), axis=1)
    cents, sizes, singular = _simplex_orthos(centers, r2, rows, tol.eps_singular)
    _raise_if_singular(singular, rows, "tetrahedron")
    keep = sizes <= cfg.alpha + tol.eps_abs
    return _sorted_level(rows[keep], cents[keep], sizes[keep])


def prune(
    potentials: PotentialSets, grid: Grid, balls: Sequence[Ball], cfg: PipelineConfig
) -> AlphaComplex:
    """Top-down pruning of a full potential set into the alpha complex."""
    centers, radii = as_ball_arrays(balls)
    r2 = radii * radii
    times: dict[str, float] = defaultdict(float)
    k0, k1, k2, k3 = _prune_levels(
        centers, r2, grid, cfg, _NeighborCache(grid),
        potentials.edges.simplices, potentials.edges.centers, potentials.edges.sizes,
        potentials.triangles.simplices, potentials.triangles.centers, potentials.triangles.sizes,
        potentials.tets.simplices, potentials.tets.centers, potentials.tets.sizes,
        vertex_ids=np.arange(len(balls), dtype=np.int64), times=times)
    result = AlphaComplex(
        vertices=k0, edges=k1, triangles=k2, tets=k3,
        alpha=cfg.alpha, ball_count=len(balls),
    )
    if not closure_ok(result):
        raise AlphaxError("internal error: output violates closure")
    return result


def default_workers() -> int:
    env = os.environ.get("ALPHAX_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
