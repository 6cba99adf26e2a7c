"""Exact star-discrepancy computation, low-discrepancy point generators,
and optimal subset selection."""

from .geometry import (
    DiscrepancyResult,
    LocalDiscrepancy,
    PointSet,
    closed_count,
    local_discrepancy,
    open_count,
    read_point_file,
    star_discrepancy,
    star_discrepancy_1d,
    star_discrepancy_2d,
    star_discrepancy_grid,
    write_point_file,
)
from .generators import GENERATOR_KINDS, GeneratorSpec, generate
from .solver import (
    SubsetSelection,
    bb_subset,
    brute_force_subset,
    greedy_subset,
    random_subset_search,
)
from .milp import build_model, verify_solution, write_lp

__version__ = "0.1.0"

__all__ = [
    "PointSet",
    "LocalDiscrepancy",
    "DiscrepancyResult",
    "open_count",
    "closed_count",
    "local_discrepancy",
    "star_discrepancy",
    "star_discrepancy_grid",
    "star_discrepancy_2d",
    "star_discrepancy_1d",
    "read_point_file",
    "write_point_file",
    "GeneratorSpec",
    "GENERATOR_KINDS",
    "generate",
    "SubsetSelection",
    "brute_force_subset",
    "random_subset_search",
    "greedy_subset",
    "bb_subset",
    "build_model",
    "write_lp",
    "verify_solution",
    "__version__",
]
