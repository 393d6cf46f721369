import numpy as np
import pytest

from alphax import Ball, EmptyInput, build_grid, cell_of, neighborhood
from alphax.grid import CellKey, build_grid_arrays
from alphax.synth import random_instance


def test_cell_side_from_r_max():
    balls = [Ball((0, 0, 0), 2, 0), Ball((5, 1, 1), 1, 1)]
    grid = build_grid(balls, alpha=0.0)
    assert grid.cell_side == pytest.approx(2.0)
    grid = build_grid(balls, alpha=5.0)
    assert grid.cell_side == pytest.approx(3.0)


def test_single_ball_grid():
    grid = build_grid([Ball((3, 4, 5), 1, 0)], alpha=0.0)
    assert grid.dims == (1, 1, 1)
    assert list(grid.cell_ranges) == [CellKey(0, 0, 0)]
    assert list(grid.order) == [0]


def test_distant_balls_cell_key_separation():
    balls = [Ball((0, 0, 0), 2, 0), Ball((100, 0, 0), 2, 1)]
    grid = build_grid(balls, alpha=0.0)
    a = cell_of(grid, balls[0].center)
    b = cell_of(grid, balls[1].center)
    assert b.ix - a.ix == 50
    assert (b.iy, b.iz) == (a.iy, a.iz)


def test_cell_of_floor_and_boundaries():
    balls = [Ball((0, 0, 0), 2, 0), Ball((6, 6, 6), 2, 1)]
    grid = build_grid(balls, alpha=0.0)  # side 2, origin (0,0,0)
    assert cell_of(grid, (3.5, 0.1, 5.9)) == CellKey(1, 0, 2)
    assert cell_of(grid, (0.0, 0.0, 0.0)) == CellKey(0, 0, 0)
    # cells are half-open: a point on the x=2 boundary is in cell 1
    assert cell_of(grid, (2.0, 0.0, 0.0)).ix == 1
    # clamped outside the box
    assert cell_of(grid, (-5.0, 0.0, 99.0)) == CellKey(0, 0, 3)


def test_grid_invariants_random():
    balls = random_instance(120, seed=2)
    grid = build_grid(balls, alpha=1.0)
    n = len(balls)
    assert sorted(grid.order.tolist()) == list(range(n))
    centers = np.array([b.center for b in balls])
    # dims cover the bounding box
    top = grid.origin + np.asarray(grid.dims) * grid.cell_side
    assert (top >= centers.max(axis=0) - 1e-12).all()
    # every ball in a cell range hashes to that cell
    for key, (s, e) in grid.cell_ranges.items():
        for ball_idx in grid.order[s:e]:
            assert cell_of(grid, balls[ball_idx].center) == key
    # order is sorted by (cell key, ball index)
    keyed = [(grid.ball_cells[i], i) for i in grid.order]
    assert keyed == sorted(keyed)


def test_neighborhood_single_ball():
    grid = build_grid([Ball((0, 0, 0), 1, 0)], alpha=0.0)
    assert list(neighborhood(grid, CellKey(0, 0, 0), 1)) == [0]


def test_neighborhood_radius_sensitivity():
    # a ball 1.5 cell sides away on one axis from the query point: outside
    # the radius-1 block, inside the radius-2 block
    balls = [
        Ball((0.0, 0.0, 0.0), 1, 0),   # pins the origin
        Ball((0.6, 0.5, 0.5), 1, 1),   # query point
        Ball((2.1, 0.5, 0.5), 1, 2),   # 1.5 sides away from the query
    ]
    grid = build_grid(balls, alpha=0.0)  # side 1
    key = cell_of(grid, balls[1].center)
    assert key == CellKey(0, 0, 0)
    assert 2 not in set(neighborhood(grid, key, 1))
    assert 2 in set(neighborhood(grid, key, 2))


def test_neighborhood_full_block():
    balls = []
    for iz in range(3):
        for iy in range(3):
            for ix in range(3):
                balls.append(Ball((ix + 0.5, iy + 0.5, iz + 0.5), 1.0, len(balls)))
    grid = build_grid(balls, alpha=0.0)  # side 1, origin (0.5, 0.5, 0.5)
    assert grid.dims == (3, 3, 3)
    got = list(neighborhood(grid, CellKey(1, 1, 1), 1))
    assert sorted(got) == list(range(27))


def test_neighborhood_sorted_and_deterministic():
    balls = random_instance(80, seed=4)
    grid = build_grid(balls, alpha=0.5)
    key = cell_of(grid, balls[17].center)
    first = list(neighborhood(grid, key, 2))
    assert first == list(neighborhood(grid, key, 2))
    assert len(first) == len(set(first))
    keyed = [(int(grid.ball_cells[i]), i) for i in first]
    assert keyed == sorted(keyed)


def test_neighborhood_radius_validation():
    grid = build_grid([Ball((0, 0, 0), 1, 0)], alpha=0.0)
    with pytest.raises(ValueError):
        list(neighborhood(grid, CellKey(0, 0, 0), 3))


def test_empty_input_and_bad_alpha():
    with pytest.raises(EmptyInput):
        build_grid([], alpha=0.0)
    with pytest.raises(ValueError):
        build_grid([Ball((0, 0, 0), 1, 0)], alpha=-1.0)


def test_non_finite_rejected():
    from alphax.errors import NonFiniteCoordinate

    centers = np.array([[0.0, 0.0, 0.0], [np.nan, 0.0, 0.0]])
    radii = np.array([1.0, 1.0])
    with pytest.raises(NonFiniteCoordinate):
        build_grid_arrays(centers, radii, 0.0)


def test_pruning_locality_radius1_equals_all_balls():
    # every ball able to dominate the ortho-center of a potential simplex
    # lies in the radius-1 neighborhood of the center's cell
    from alphax import PipelineConfig, potential_edges, potential_tets, potential_triangles
    from alphax.oracle import _ac2_all
    from alphax.pipeline import _NeighborCache, _ac2_mask, as_ball_arrays

    checked = 0
    for seed in range(6):
        balls = random_instance(70, seed=seed + 100)
        centers, radii = as_ball_arrays(balls)
        r2 = radii * radii
        cfg = PipelineConfig(alpha=1.5)
        grid = build_grid(balls, cfg.alpha)
        edges = potential_edges(grid, balls, cfg)
        tris = potential_triangles(edges, grid, balls, cfg)
        tets = potential_tets(tris, grid, balls, cfg)
        for level in (edges, tris, tets):
            local = _ac2_mask(
                centers, r2, grid, _NeighborCache(grid),
                level.simplices, level.centers, level.sizes, cfg.tolerance.eps_abs)
            full = _ac2_all(
                centers, r2, level.simplices, level.centers, level.sizes,
                cfg.tolerance.eps_abs)
            assert (local == full).all()
            checked += len(level)
    assert checked > 500


def test_edge_enumeration_completeness_vs_all_pairs():
    # radius-2 neighborhood enumeration finds exactly the all-pairs set
    from alphax import PipelineConfig, potential_edges
    from alphax.oracle import _pair_rows
    from alphax.pipeline import _simplex_orthos, as_ball_arrays

    for seed in (0, 1, 2):
        balls = random_instance(60, seed=seed + 300)
        centers, radii = as_ball_arrays(balls)
        cfg = PipelineConfig(alpha=2.0)
        grid = build_grid(balls, cfg.alpha)
        got = potential_edges(grid, balls, cfg).simplices
        pairs = _pair_rows(len(balls))
        _, sizes, _ = _simplex_orthos(centers, radii * radii, pairs, 1e-12)
        want = pairs[sizes <= cfg.alpha + cfg.tolerance.eps_abs]
        assert np.array_equal(got, want)
