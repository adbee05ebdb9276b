"""Exact computations in the Fibonacci difference spaces c0^lambda(F) and c^lambda(F)."""

from .numerics import (
    LambdaSequence,
    Status,
    Verdict,
    cassini_residual,
    estimate_limit,
    estimate_sup,
    fib,
    fib_sum_residual,
    golden_ratio_gap,
    parse_rational,
    render_rational,
)

__version__ = "0.1.0"

__all__ = [
    "LambdaSequence",
    "Status",
    "Verdict",
    "cassini_residual",
    "estimate_limit",
    "estimate_sup",
    "fib",
    "fib_sum_residual",
    "golden_ratio_gap",
    "parse_rational",
    "render_rational",
]
