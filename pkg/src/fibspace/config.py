"""Run configuration shared by every command."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .numerics import check_horizon, render_rational

FORMATS = ("json", "csv", "pretty")


@dataclass(frozen=True)
class RunConfig:
    depth: int = 200
    window: int = 16
    tol: Fraction = Fraction(1, 10 ** 6)
    threshold: Fraction = Fraction(10 ** 9)
    horizon: int = 10
    row_budget: int = 32
    lam: str = "linear"
    format: str = "json"

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.window < 2:
            raise ValueError("window must be >= 2")
        if self.tol < 0 or self.threshold <= 0:
            raise ValueError("tol must be >= 0 and threshold > 0")
        check_horizon(self.horizon)
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    @property
    def limit_depth(self) -> int:
        # limit estimates need a full window below the depth
        return max(self.depth, self.window)

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "window": self.window,
            "tol": render_rational(self.tol),
            "threshold": render_rational(self.threshold),
            "horizon": self.horizon,
            "row_budget": self.row_budget,
            "lambda": self.lam,
            "format": self.format,
        }
