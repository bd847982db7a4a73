"""Greedy Kaczmarz / Motzkin-Kaczmarz solvers and convergence analysis."""

from ._kaczmarz import (
    HistoryRecord,
    RowMatrix,
    SolveReport,
    bound_report,
    generate,
    grk_factor,
    grmk_general_factor,
    lambda_min_pos,
    min_norm_solution,
    read_matrix_market,
    solve,
    write_matrix_market,
)

__all__ = [
    "HistoryRecord",
    "RowMatrix",
    "SolveReport",
    "bound_report",
    "generate",
    "grk_factor",
    "grmk_general_factor",
    "lambda_min_pos",
    "min_norm_solution",
    "read_matrix_market",
    "solve",
    "write_matrix_market",
]
