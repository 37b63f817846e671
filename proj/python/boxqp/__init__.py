"""Two-stage solvers for box-constrained quadratic programs."""

from ._core import (
    BqpProblem,
    apg_solve,
    appa_solve,
    estimate_lipschitz,
    gen_deblur,
    gen_pde,
    gen_random_ncbqp,
    gen_random_nnls,
    kkt_residual,
    ppa_solve,
    project_box,
    solve,
)

__all__ = [
    "BqpProblem",
    "apg_solve",
    "appa_solve",
    "estimate_lipschitz",
    "gen_deblur",
    "gen_pde",
    "gen_random_ncbqp",
    "gen_random_nnls",
    "kkt_residual",
    "ppa_solve",
    "project_box",
    "solve",
]
