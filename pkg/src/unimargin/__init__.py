"""Uniform-margin transforms of binary contingency tables."""
from .closed_forms import symmetric_3d, uniform_sections_3d, uniformize_2d
from .family import complete_table, sample_family, verify_family_point
from .io import TableDocument, load_table, save_table
from .solvers import SolverConfig, cross_validate, solve_ipf, solve_newton
from .tables import (
    DependenceProfile3,
    Table2,
    Table3,
    conditional_odds_ratio,
    dependence_profile,
    margins_1d,
    normalize,
    odds_ratio_2x2,
    odds_ratio_3d,
)

__all__ = [
    "DependenceProfile3",
    "SolverConfig",
    "Table2",
    "Table3",
    "TableDocument",
    "complete_table",
    "conditional_odds_ratio",
    "cross_validate",
    "dependence_profile",
    "load_table",
    "margins_1d",
    "normalize",
    "odds_ratio_2x2",
    "odds_ratio_3d",
    "sample_family",
    "save_table",
    "solve_ipf",
    "solve_newton",
    "symmetric_3d",
    "uniform_sections_3d",
    "uniformize_2d",
    "verify_family_point",
]
