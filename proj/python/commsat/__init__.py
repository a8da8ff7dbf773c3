"""Community-structured 3-SAT instances with a planted solution."""

from ._core import (
    ClauseDistribution,
    CommsatError,
    Instance,
    __version__,
    beta_of,
    brute_force_count,
    dpll_solve,
    generate,
    midpoint_params,
    modularity,
    preset_params,
    qhidden_params,
    read_dimacs,
    walksat_probe,
    write_dimacs,
)

__all__ = [
    "ClauseDistribution",
    "CommsatError",
    "Instance",
    "__version__",
    "beta_of",
    "brute_force_count",
    "dpll_solve",
    "generate",
    "midpoint_params",
    "modularity",
    "preset_params",
    "qhidden_params",
    "read_dimacs",
    "walksat_probe",
    "write_dimacs",
]
