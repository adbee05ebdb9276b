"""Pointwise checks of the alpha-, beta- and gamma-dual conditions b1..b5."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .numerics import (
    ZERO,
    LambdaSequence,
    Status,
    Verdict,
    check_horizon,
    conjunction,
    estimate_limit,
    estimate_sup,
    fib,
    mask_members,
    max_subset_abs_sum,
)
from .spaces import SequenceOracle, b_sequence

Sequence_ = Callable[[int], Fraction]


def _diag_weight(lam: LambdaSequence, n: int) -> Fraction:
    # lambda_n/(lambda_n - lambda_{n-1}) * f_{n+1}^2/(f_n f_{n+1})
    return lam(n) / lam.step(n) * Fraction(fib(n + 1), fib(n))


def _tail_weight(lam: LambdaSequence, k: int) -> Fraction:
    return (Fraction(1, fib(k) * fib(k + 1)) / lam.step(k)
            - Fraction(1, fib(k + 1) * fib(k + 2)) / lam.step(k + 1))


def alpha_matrix_entry(a: Sequence_, lam: LambdaSequence, n: int, k: int) -> Fraction:
    """Entry b_nk of the matrix whose l1-class membership decides the alpha-dual."""
    if k > n or n < 0 or k < 0:
        return ZERO
    square = fib(n + 1) ** 2
    if k == n:
        return lam(k) / lam.step(k) * Fraction(square, fib(k) * fib(k + 1)) * a(n)
    return lam(k) * square * _tail_weight(lam, k) * a(n)


def abar_k_n(a: Sequence_, lam: LambdaSequence, k: int, n: int) -> Fraction:
    if not 0 <= k < n:
        raise ValueError("abar_k(n) is defined for 0 <= k < n")
    tail = sum((fib(j + 1) ** 2 * a(j) for j in range(k + 1, n + 1)), ZERO)
    return lam(k) * (a(k) / lam.step(k) * Fraction(fib(k + 1), fib(k))
                     + _tail_weight(lam, k) * tail)


def t_matrix_entry(a: Sequence_, lam: LambdaSequence, n: int, k: int) -> Fraction:
    if k > n or n < 0 or k < 0:
        return ZERO
    if k == n:
        return _diag_weight(lam, n) * a(n)
    return abar_k_n(a, lam, k, n)


class _WeightedPrefix:
    """P_n = sum_{j<=n} f_{j+1}^2 a_j, extended on demand."""

    def __init__(self, a: Sequence_) -> None:
        self.a = a
        self.values: list[Fraction] = []

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            return ZERO
        values = self.values
        while len(values) <= n:
            j = len(values)
            values.append((values[-1] if values else ZERO) + fib(j + 1) ** 2 * self.a(j))
        return values[n]


def _finite_support(a: SequenceOracle) -> Optional[int]:
    # user data is never certified
    return a.support if getattr(a, "builtin", False) else None


def check_b1(a: SequenceOracle, lam: LambdaSequence, m: int = 10, depth: int = 60,
             threshold: Fraction = Fraction(10 ** 9)) -> Verdict:
    """Exhaustive max over K in {0..m} of sum_{n<=depth} |sum_{k in K} b_nk|.

    The result is a lower bound for the supremum over all finite K and is
    nondecreasing in both m and depth.
    """
    check_horizon(m)
    threshold = Fraction(threshold)
    rows = [[alpha_matrix_entry(a, lam, n, k) for k in range(min(m, n) + 1)]
            for n in range(depth + 1)]
    value, mask = max_subset_abs_sum(rows, m + 1)
    evidence = tuple((k, ZERO) for k in mask_members(mask))
    note = f"best K = {mask_members(mask)} within {{0..{m}}}, rows 0..{depth}"
    if value > threshold:
        return Verdict(Status.EMPIRICAL_FALSE, depth=depth,
                       threshold=threshold, value=value, evidence=evidence, note=note)
    support = _finite_support(a)
    if support is not None and m >= support - 1 and depth >= support - 1:
        return Verdict(Status.CERTIFIED_TRUE, depth=depth, value=value, evidence=evidence,
                       note=note + "; all nonzero rows and columns enumerated")
    return Verdict(Status.EMPIRICAL_TRUE, depth=depth, threshold=threshold, value=value,
                   evidence=evidence, note=note)


def check_b2(a: SequenceOracle, lam: LambdaSequence, depth: int, window: int,
             tol: Fraction, threshold: Fraction, spot: int = 8) -> Verdict:
    """Convergence of sum_{j>=k} a_j f_{j+1}^2, at k = 0 and spot checks k <= spot."""
    prefix = _WeightedPrefix(a)
    support = _finite_support(a)
    settled = None if support is None else max(support - 1, 0)
    parts = []
    for k in range(min(spot, depth - window) + 1):
        parts.append(estimate_limit(lambda n, k=k: prefix(n) - prefix(k - 1), depth, window,
                                    tol, threshold, settled_after=settled))
    head = parts[0]
    combined = conjunction(parts)
    return Verdict(combined.status, depth=depth, threshold=head.threshold, value=head.value,
                   evidence=head.evidence,
                   note=f"tails from k = 0..{len(parts) - 1}; value is the k = 0 series")


class _AbarSums:
    """n -> sum_{k<n} |abar_k(n)| in O(n) per index via the weighted prefix."""

    def __init__(self, a: Sequence_, lam: LambdaSequence) -> None:
        self.a, self.lam = a, lam
        self.prefix = _WeightedPrefix(a)

    def row(self, n: int) -> list[Fraction]:
        a, lam, P = self.a, self.lam, self.prefix
        Pn = P(n)
        return [lam(k) * (a(k) / lam.step(k) * Fraction(fib(k + 1), fib(k))
                          + _tail_weight(lam, k) * (Pn - P(k)))
                for k in range(n)]

    def __call__(self, n: int) -> Fraction:
        return sum((abs(v) for v in self.row(n)), ZERO)


def check_b3(a: SequenceOracle, lam: LambdaSequence, depth: int,
             threshold: Fraction) -> Verdict:
    support = _finite_support(a)
    return estimate_sup(_AbarSums(a, lam), depth, threshold, settled_after=support)


def check_b4(a: SequenceOracle, lam: LambdaSequence, depth: int,
             threshold: Fraction) -> Verdict:
    support = _finite_support(a)
    return estimate_sup(lambda n: abs(_diag_weight(lam, n) * a(n)), depth, threshold,
                        settled_after=support)


def check_b5(a: SequenceOracle, lam: LambdaSequence, depth: int, window: int,
             tol: Fraction, threshold: Fraction) -> Verdict:
    """Convergence of a_0 + sum_{k>=1} b_k a_k (b the preimage of e).

    The a_k factor is included, as in the row-sum identity it comes from.
    """
    partial: list[Fraction] = []

    def stream(n: int) -> Fraction:
        while len(partial) <= n:
            k = len(partial)
            partial.append((partial[-1] if partial else ZERO) + b_sequence(k) * a(k))
        return partial[n]

    support = _finite_support(a)
    settled = None if support is None else max(support - 1, 0)
    return estimate_limit(stream, depth, window, tol, threshold, settled_after=settled)


@dataclass(frozen=True)
class DualConditionReport:
    conditions: dict
    overall: dict

    def to_json(self) -> dict:
        out = {name: v.to_json() for name, v in self.conditions.items()}
        out.update({name: v.to_json() for name, v in self.overall.items()})
        return out


def compose_duals(conditions: dict) -> dict:
    b = conditions
    return {
        "alpha": b["b1"],
        "beta_c0": conjunction([b["b2"], b["b3"], b["b4"]], note="b2 & b3 & b4"),
        "beta_c": conjunction([b["b3"], b["b4"], b["b5"]], note="b3 & b4 & b5"),
        "gamma": conjunction([b["b3"], b["b4"]], note="b3 & b4"),
    }


def check_beta_conditions(a: SequenceOracle, lam: LambdaSequence, depth: int = 200,
                          window: int = 16, tol: Fraction = Fraction(1, 10 ** 6),
                          threshold: Fraction = Fraction(10 ** 9), horizon: int = 10,
                          b1_depth: Optional[int] = None) -> DualConditionReport:
    """All five condition verdicts plus the composed dual verdicts."""
    tol, threshold = Fraction(tol), Fraction(threshold)
    conditions = {
        "b1": check_b1(a, lam, horizon, b1_depth if b1_depth is not None else min(depth, 60),
                       threshold),
        "b2": check_b2(a, lam, depth, window, tol, threshold),
        "b3": check_b3(a, lam, depth, threshold),
        "b4": check_b4(a, lam, depth, threshold),
        "b5": check_b5(a, lam, depth, window, tol, threshold),
    }
    return DualConditionReport(conditions, compose_duals(conditions))


DUAL_PARTS = {
    ("alpha", "c0_lambda_fhat"): ("b1",),
    ("alpha", "c_lambda_fhat"): ("b1",),
    ("beta", "c0_lambda_fhat"): ("b2", "b3", "b4"),
    ("beta", "c_lambda_fhat"): ("b3", "b4", "b5"),
    ("gamma", "c0_lambda_fhat"): ("b3", "b4"),
    ("gamma", "c_lambda_fhat"): ("b3", "b4"),
}


def dual_membership(a: SequenceOracle, lam: LambdaSequence, dual: str, space: str,
                    depth: int = 200, window: int = 16,
                    tol: Fraction = Fraction(1, 10 ** 6),
                    threshold: Fraction = Fraction(10 ** 9), horizon: int = 10) -> Verdict:
    try:
        parts = DUAL_PARTS[(dual, str(space))]
    except KeyError:
        raise ValueError(f"no {dual}-dual is characterised for {space!r}") from None
    tol, threshold = Fraction(tol), Fraction(threshold)
    checks = {
        "b1": lambda: check_b1(a, lam, horizon, min(depth, 60), threshold),
        "b2": lambda: check_b2(a, lam, depth, window, tol, threshold),
        "b3": lambda: check_b3(a, lam, depth, threshold),
        "b4": lambda: check_b4(a, lam, depth, threshold),
        "b5": lambda: check_b5(a, lam, depth, window, tol, threshold),
    }
    return conjunction([checks[name]() for name in parts], note=" & ".join(parts))
