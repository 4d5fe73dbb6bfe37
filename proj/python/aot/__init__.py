"""Adaptive optimal transport: inequality marginals, mixed-sign costs,
adaptive transported mass."""

from ._core import (
    active_regions,
    check_mass_allocation,
    dual_report,
    lambda_c,
    mass_shift_curve,
    pot_lambda_sweep,
    run_alignment,
    semidual_value,
    solve_aot_exact,
    solve_aot_sinkhorn,
    solve_kantorovich,
    solve_pot,
    transform,
)

__all__ = [
    "active_regions",
    "check_mass_allocation",
    "dual_report",
    "lambda_c",
    "mass_shift_curve",
    "pot_lambda_sweep",
    "run_alignment",
    "semidual_value",
    "solve_aot_exact",
    "solve_aot_sinkhorn",
    "solve_kantorovich",
    "solve_pot",
    "transform",
]

__version__ = "0.1.0"
