"""Network-structured sparse canonical correlation analysis."""

from ._core import (
    NetccaError,
    Scenario,
    __version__,
    canonical_correlation,
    cross_validate,
    default_tau_grids,
    fit,
    run_study,
    selection_metrics,
    solve_subproblem,
)

__all__ = [
    "NetccaError",
    "Scenario",
    "__version__",
    "canonical_correlation",
    "cross_validate",
    "default_tau_grids",
    "fit",
    "run_study",
    "selection_metrics",
    "solve_subproblem",
]
