"""Python access to the eslab core.

Angles are passed as strings in the formats the command line accepts:
decimals, fractions such as "1/3", or 0x-prefixed fixed point.
"""

from ._core import (
    ArithmeticTable,
    BudgetError,
    ConfigError,
    DomainError,
    Error,
    IoError,
    best_rational,
    classify_arc,
    count_J,
    find_representations,
    lambda_exp_sum,
    mean_value_F,
    mobius_exp_sum,
    phase_values,
    rho_exact,
    run_cli,
    sieve_window,
    singular_series,
)

__all__ = [
    "ArithmeticTable",
    "BudgetError",
    "ConfigError",
    "DomainError",
    "Error",
    "IoError",
    "best_rational",
    "classify_arc",
    "count_J",
    "find_representations",
    "lambda_exp_sum",
    "mean_value_F",
    "mobius_exp_sum",
    "phase_values",
    "rho_exact",
    "run_cli",
    "sieve_window",
    "singular_series",
]
