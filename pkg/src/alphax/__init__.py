"""Direct alpha complex construction for weighted points in R^3.

Builds the alpha complex without a prior Delaunay triangulation, via a
bottom-up potential-simplex stage and a top-down pruning stage over a uniform
grid, with an exhaustive oracle for validation at small scale.
"""

__version__ = "0.1.0"

from .errors import (
    AlphaxError,
    DegenerateSimplex,
    DuplicateCenter,
    EmptyInput,
    MalformedLine,
    MalformedRecord,
    NoAtoms,
    NonFiniteCoordinate,
    NonFiniteValue,
    NonPositiveRadius,
)
from .geometry import (
    DEFAULT_TOLERANCE,
    Ball,
    OrthoResult,
    SimplexKey,
    TolerancePolicy,
    ac2_satisfied,
    ortho_center,
    power_distance,
    simplex_compare,
)
from .grid import CellKey, Grid, build_grid, cell_of, neighborhood
from .pipeline import (
    AlphaComplex,
    ComplexStats,
    PipelineConfig,
    PotentialLevel,
    PotentialSets,
    complex_stats,
    compute_alpha_complex,
    closure_ok,
    potential_edges,
    potential_tets,
    potential_triangles,
    prune,
)
from .oracle import SizeResult, naive_alpha_complex, simplex_size
from .io import (
    RadiusTable,
    parse_pdb,
    parse_xyzr,
    read_complex,
    stats_csv,
    write_complex,
)
from .synth import random_instance

__all__ = [
    "AlphaComplex",
    "AlphaxError",
    "Ball",
    "CellKey",
    "ComplexStats",
    "DEFAULT_TOLERANCE",
    "DegenerateSimplex",
    "DuplicateCenter",
    "EmptyInput",
    "Grid",
    "MalformedLine",
    "MalformedRecord",
    "NoAtoms",
    "NonFiniteCoordinate",
    "NonFiniteValue",
    "NonPositiveRadius",
    "OrthoResult",
    "PipelineConfig",
    "PotentialLevel",
    "PotentialSets",
    "RadiusTable",
    "SimplexKey",
    "SizeResult",
    "TolerancePolicy",
    "ac2_satisfied",
    "build_grid",
    "cell_of",
    "closure_ok",
    "complex_stats",
    "compute_alpha_complex",
    "naive_alpha_complex",
    "neighborhood",
    "ortho_center",
    "parse_pdb",
    "parse_xyzr",
    "potential_edges",
    "potential_tets",
    "potential_triangles",
    "power_distance",
    "prune",
    "random_instance",
    "read_complex",
    "simplex_compare",
    "simplex_size",
    "stats_csv",
    "write_complex",
]
