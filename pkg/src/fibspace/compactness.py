"""Operator norms, tail norms and Hausdorff measure of noncompactness estimates
for matrix operators on the weighted Fibonacci spaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .classes import TransformedMatrix, _rank
from .matrices import MatrixOracle
from .numerics import (
    ZERO,
    LambdaSequence,
    Status,
    Verdict,
    check_horizon,
    estimate_limit,
    estimate_sup,
    mask_members,
    max_subset_abs_sum,
    render_decimal,
    render_rational,
)

TAIL_KINDS = ("linf_like", "l1", "bv")
HMNC_TARGETS = {"c0": "linf_like", "c": "linf_like", "l_inf": "linf_like",
                "l1": "l1", "bv": "bv"}


def _transformed(A: MatrixOracle, lam: LambdaSequence, depth: int,
                 T: Optional[TransformedMatrix]) -> TransformedMatrix:
    if T is None or T.A is not A or T.lam != lam or T.tail_depth != depth:
        T = TransformedMatrix(A, lam, depth)
    return T


def operator_norm_linf(A: MatrixOracle, lam: LambdaSequence, depth: int = 200,
                       threshold: Fraction = Fraction(10 ** 9),
                       T: Optional[TransformedMatrix] = None) -> Verdict:
    """max_{n<=depth} sum_k |abar_nk|, a lower bound for the operator norm.

    The verdict says whether the norm is finite; it is certified when every
    nonzero row was scanned.
    """
    T = _transformed(A, lam, depth, T)
    rank = _rank(A)
    settled = None if rank is None else max(rank - 1, 0)
    return estimate_sup(T.abs_sum, depth, threshold, settled_after=settled)


def _column_vectors(rows: Sequence[list]) -> list:
    """Transpose rows of unequal length into per-column vectors."""
    width = max((len(r) for r in rows), default=0)
    return [[r[k] if k < len(r) else ZERO for r in rows] for k in range(width)]


def _subset_norm(rows: Sequence[list]) -> tuple:
    """max over subsets N of the given rows of sum_k |sum_{n in N} row_n[k]|."""
    return max_subset_abs_sum(_column_vectors(rows), len(rows))


def operator_norm_l1_bounds(A: MatrixOracle, lam: LambdaSequence, depth: int = 200,
                            horizon: int = 10,
                            T: Optional[TransformedMatrix] = None) -> tuple:
    """Return ``(L, 4L, verdict)``, the sandwich L <= ||L_A|| <= 4L.

    L is the exhaustive maximum over N within rows {0..horizon}.
    """
    check_horizon(horizon)
    T = _transformed(A, lam, depth, T)
    value, mask = _subset_norm([T.row(n) for n in range(horizon + 1)])
    rank = _rank(A)
    note = f"best N = {mask_members(mask)} within {{0..{horizon}}}"
    if rank is not None and rank - 1 <= horizon:
        verdict = Verdict(Status.CERTIFIED_TRUE, depth=depth, value=value,
                          note=note + "; every nonzero row enumerated")
    else:
        verdict = Verdict(Status.EMPIRICAL_TRUE, depth=depth, value=value, note=note)
    return value, 4 * value, verdict


def tail_norm(A: MatrixOracle, lam: LambdaSequence, m: int, depth: int = 200,
              target: str = "linf_like", horizon: int = 10,
              T: Optional[TransformedMatrix] = None) -> Fraction:
    """The tail quantity ||A||^(m) for rows n > m.

    ``linf_like`` scans rows m+1..depth; ``l1`` and ``bv`` maximise over
    subsets of {m+1, ..., m+1+horizon}, ``bv`` on row differences of abar.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if target not in TAIL_KINDS:
        raise ValueError(f"unknown tail target {target!r}; known: {list(TAIL_KINDS)}")
    T = _transformed(A, lam, depth, T)
    if target == "linf_like":
        return max((T.abs_sum(n) for n in range(m + 1, depth + 1)), default=ZERO)
    check_horizon(horizon)
    window = range(m + 1, m + horizon + 2)
    if target == "l1":
        rows = [T.row(n) for n in window]
    else:
        rows = []
        for n in window:
            cur, prev = T.row(n), T.row(n - 1)
            size = max(len(cur), len(prev))
            rows.append([(cur[k] if k < len(cur) else ZERO)
                         - (prev[k] if k < len(prev) else ZERO) for k in range(size)])
    return _subset_norm(rows)[0]


@dataclass(frozen=True)
class HmncEstimate:
    kind: str                 # equality | interval | upper_bound
    target: str
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    samples: tuple            # (m, tail norm) pairs
    verdict: Verdict          # convergence verdict of the tail norms

    def to_json(self) -> dict:
        out = {"kind": self.kind, "target": self.target}
        for name in ("lower", "upper"):
            value = getattr(self, name)
            out[name] = None if value is None else render_rational(value)
            if value is not None:
                out[name + "_decimal"] = render_decimal(value)
        out["limit"] = self.verdict.to_json()
        return out


def _settled_index(grid: Sequence[int], rank: Optional[int], kind: str) -> Optional[int]:
    if rank is None:
        return None
    # rows beyond rank - 1 vanish; row differences vanish one row later
    first = rank if kind == "bv" else rank - 1
    for i, m in enumerate(grid):
        if m >= first:
            return i
    return None


def hmnc_estimate(A: MatrixOracle, lam: LambdaSequence, target: str,
                  m_grid: Optional[Sequence[int]] = None, depth: int = 200,
                  window: int = 16, tol: Fraction = Fraction(1, 10 ** 6),
                  threshold: Fraction = Fraction(10 ** 9), horizon: int = 10) -> HmncEstimate:
    """Estimate ||L_A||_chi from the limit over m of the tail norms."""
    try:
        kind = HMNC_TARGETS[target]
    except KeyError:
        raise ValueError(f"no estimate for target {target!r}; known: {list(HMNC_TARGETS)}") \
            from None
    grid = list(range(17) if m_grid is None else m_grid)
    if len(grid) < 3 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("m-grid must be increasing with at least 3 points")
    if kind != "linf_like" and grid[-1] + horizon + 1 > depth:
        raise ValueError("depth too small for the m-grid and subset horizon")
    T = TransformedMatrix(A, lam, depth)
    values = [tail_norm(A, lam, m, depth, kind, horizon, T) for m in grid]
    samples = tuple(zip(grid, values))
    w = min(window, len(grid) - 1)
    limit = estimate_limit(values.__getitem__, len(grid) - 1, w, tol, threshold,
                           settled_after=_settled_index(grid, _rank(A), kind))
    if limit.holds is not True:
        return HmncEstimate("indeterminate", target, None, None, samples, limit)
    v = limit.value
    if target == "c":
        return HmncEstimate("interval", target, v / 2, v, samples, limit)
    if target == "l_inf":
        return HmncEstimate("upper_bound", target, ZERO, v, samples, limit)
    return HmncEstimate("equality", target, v, v, samples, limit)


def compactness_verdict(A: MatrixOracle, lam: LambdaSequence, target: str,
                        m_grid: Optional[Sequence[int]] = None, depth: int = 200,
                        window: int = 16, tol: Fraction = Fraction(1, 10 ** 6),
                        threshold: Fraction = Fraction(10 ** 9),
                        horizon: int = 10) -> tuple:
    """Return ``(verdict, estimate)``; the verdict holds when L_A is compact.

    The criterion presumes A already maps into the target.  For l_inf a zero
    tail limit is only sufficient, so a nonzero limit gives indeterminate.
    """
    est = hmnc_estimate(A, lam, target, m_grid, depth, window, tol, threshold, horizon)
    limit = est.verdict
    if limit.holds is not True:
        return limit.with_status(Status.INDETERMINATE, "tail norms did not settle"), est
    zero = limit.value == 0 if limit.certified else abs(limit.value) <= Fraction(tol)
    if zero:
        status = Status.CERTIFIED_TRUE if limit.certified and limit.value == 0 \
            else Status.EMPIRICAL_TRUE
        return limit.with_status(status, "tail norms tend to 0: compact"), est
    if target == "l_inf":
        return limit.with_status(
            Status.INDETERMINATE,
            "nonzero tail limit; for l_inf the criterion is only sufficient"), est
    status = Status.CERTIFIED_FALSE if limit.certified else Status.EMPIRICAL_FALSE
    return limit.with_status(status, "tail norms do not tend to 0: not compact"), est
