import math

import pytest

from alphax import Ball


def regular_tetra_balls(radius=1.0):
    """Unit balls on a regular tetrahedron with edge length 2."""
    h = 2.0 * math.sqrt(6.0) / 3.0
    return [
        Ball((0.0, 0.0, 0.0), radius, 0),
        Ball((2.0, 0.0, 0.0), radius, 1),
        Ball((1.0, math.sqrt(3.0), 0.0), radius, 2),
        Ball((1.0, 1.0 / math.sqrt(3.0), h), radius, 3),
    ]


def dominated_edge_balls():
    """Two unit balls whose connecting edge is dominated by a third ball
    sitting next to the edge midpoint."""
    return [
        Ball((0.0, 0.0, 0.0), 1.0, 0),
        Ball((4.0, 0.0, 0.0), 1.0, 1),
        Ball((2.0, 0.5, 0.0), 1.0, 2),
    ]


@pytest.fixture
def tetra():
    return regular_tetra_balls()
