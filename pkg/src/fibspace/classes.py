"""Class membership of infinite matrices between the weighted Fibonacci spaces
and the classical spaces c0, c, l_inf and l_p.

Forward classes (source c0_lambda_fhat or c_lambda_fhat) are decided through
the transformed matrix abar = (abar_nk).  Reverse classes (target a weighted
space) are reduced to classical conditions on C = Fbar * A.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .matrices import MatrixOracle
from .numerics import (
    ZERO,
    LambdaSequence,
    Status,
    Verdict,
    abs_power,
    check_horizon,
    conjunction,
    estimate_limit,
    estimate_sup,
    fib,
    mask_members,
    max_subset_abs_sum,
    parse_rational,
    render_rational,
)
from .spaces import LAMBDA_SPACES, _zero_limit, b_sequence

ROW_BUDGET = 32


# ---------------------------------------------------------------------------
# the transformed matrix
# ---------------------------------------------------------------------------

def _scale(lam: LambdaSequence, k: int) -> Fraction:
    # f_{k+1}^2/(f_k f_{k+1}) * lambda_k/(lambda_k - lambda_{k-1})
    return Fraction(fib(k + 1), fib(k)) * lam(k) / lam.step(k)


def _tail_coefficient(lam: LambdaSequence, k: int) -> Fraction:
    return lam(k) * (Fraction(1, fib(k) * fib(k + 1)) / lam.step(k)
                     - Fraction(1, fib(k + 1) * fib(k + 2)) / lam.step(k + 1))


def abar_nk_m(A: MatrixOracle, lam: LambdaSequence, n: int, k: int, m: int) -> Fraction:
    """abar_nk(m), the transformed entry with the tail cut after column m."""
    if not 0 <= k < m:
        raise ValueError(f"abar_nk(m) needs 0 <= k < m, got k={k}, m={m}")
    tail = sum((fib(j + 1) ** 2 * A.entry(n, j) for j in range(k + 1, m + 1)), ZERO)
    return _scale(lam, k) * A.entry(n, k) + _tail_coefficient(lam, k) * tail


class TransformedMatrix:
    """Rows of abar for a fixed (A, lambda), memoised.

    A row with known extent e is exact: abar_nk vanishes for k > e.  Other rows
    are evaluated with the tail series cut at ``tail_depth`` and are flagged
    inexact.
    """

    def __init__(self, A: MatrixOracle, lam: LambdaSequence, tail_depth: int = 200) -> None:
        self.A, self.lam, self.tail_depth = A, lam, tail_depth
        self._rows: dict = {}
        self._abs: dict = {}
        self._total: dict = {}

    def exact(self, n: int) -> bool:
        return self.A.row_extent(n) is not None

    def row(self, n: int) -> list:
        try:
            return self._rows[n]
        except KeyError:
            pass
        A, lam = self.A, self.lam
        extent = A.row_extent(n)
        last = self.tail_depth if extent is None else extent
        weighted = [fib(j + 1) ** 2 * A.entry(n, j) for j in range(last + 1)]
        tails = [ZERO] * (last + 2)
        for j in range(last, -1, -1):
            tails[j] = tails[j + 1] + weighted[j]
        row = [_scale(lam, k) * A.entry(n, k) + _tail_coefficient(lam, k) * tails[k + 1]
               for k in range(last + 1)]
        self._rows[n] = row
        return row

    def entry(self, n: int, k: int) -> Fraction:
        row = self.row(n)
        if k < len(row):
            return row[k]
        if self.exact(n):
            return ZERO
        return abar_nk_m(self.A, self.lam, n, k, max(self.tail_depth, k + 1))

    def abs_sum(self, n: int) -> Fraction:
        if n not in self._abs:
            self._abs[n] = sum((abs(v) for v in self.row(n)), ZERO)
        return self._abs[n]

    def total(self, n: int) -> Fraction:
        if n not in self._total:
            self._total[n] = sum(self.row(n), ZERO)
        return self._total[n]


def _rank(A: MatrixOracle) -> Optional[int]:
    """Row index from which every row vanishes, when all rows are finite."""
    if A.finite_rows and A.zero_from is not None:
        return A.zero_from
    return None


def abar_nk(A: MatrixOracle, lam: LambdaSequence, n: int, k: int, depth: int = 200,
            window: int = 16, tol: Fraction = Fraction(1, 10 ** 6),
            threshold: Fraction = Fraction(10 ** 9)) -> Verdict:
    """abar_nk as the limit over m of abar_nk(m); ``value`` holds the entry."""
    extent = A.row_extent(n)
    if extent is not None:
        value = abar_nk_m(A, lam, n, k, max(extent, k + 1))
        return Verdict(Status.CERTIFIED_TRUE, depth=max(extent, k + 1), value=value,
                       note="finite row: tail series is a finite sum")
    return estimate_limit(lambda m: abar_nk_m(A, lam, n, k, max(m, k + 1)),
                          depth, window, tol, threshold)


def row_limit_a_n(A: MatrixOracle, lam: LambdaSequence, n: int, depth: int = 200,
                  window: int = 16, tol: Fraction = Fraction(1, 10 ** 6),
                  threshold: Fraction = Fraction(10 ** 9)) -> Verdict:
    """a_n = lim_k of the scaled entries of row n."""
    extent = A.row_extent(n)
    if extent is not None:
        return Verdict(Status.CERTIFIED_TRUE, depth=extent + 1, value=ZERO,
                       note=f"scaled row vanishes from k = {extent + 1}")
    return estimate_limit(lambda k: _scale(lam, k) * A.entry(n, k), depth, window, tol,
                          threshold)


def image_limit(alphas: Sequence[Fraction], alpha: Fraction, a: Fraction,
                y: Callable[[int], Fraction], l: Fraction) -> Fraction:
    """lim_n A_n(x) for A in (c_lambda_fhat : c), where y = Fbar(x) -> l.

    Equals sum_k alpha_k (y_k - l) + l alpha + l a, with the sum over the
    given column limits.
    """
    return (sum((ak * (y(k) - l) for k, ak in enumerate(alphas)), ZERO)
            + l * alpha + l * a)


# ---------------------------------------------------------------------------
# class identifiers
# ---------------------------------------------------------------------------

FORWARD_TARGETS = ("lp", "l_inf", "c", "c0")
REVERSE_SOURCES = ("c0", "c", "lp")

CLASS_CONDITIONS = {
    ("c_lambda_fhat", "lp"): ("c25", "c26", "c27", "c28", "c29"),
    ("c_lambda_fhat", "l_inf"): ("c27", "c28", "c30", "c31"),
    ("c0_lambda_fhat", "lp"): ("c25", "c26", "c37", "c38"),
    ("c0_lambda_fhat", "l_inf"): ("c30", "c37", "c38"),
    ("c_lambda_fhat", "c"): ("c27", "c28", "c30", "c49", "c50", "c51"),
    ("c_lambda_fhat", "c0"): ("c27", "c28", "c30", "c53", "c54", "c56"),
    ("c0_lambda_fhat", "c"): ("c30", "c37", "c38", "c50"),
    ("c0_lambda_fhat", "c0"): ("c30", "c37", "c38", "c54"),
    ("c0", "c0_lambda_fhat"): ("c22", "c23"),
    ("c", "c0_lambda_fhat"): ("c22", "c23", "c24"),
    ("lp", "c0_lambda_fhat"): ("entries", "c23"),
    ("c0", "c_lambda_fhat"): ("c13", "c14"),
    ("c", "c_lambda_fhat"): ("c13", "c14", "c15"),
    ("lp", "c_lambda_fhat"): ("entries", "c13"),
}


@dataclass(frozen=True)
class ClassId:
    source: str
    target: str
    p: Optional[Fraction] = None

    @classmethod
    def parse(cls, text: str, p=None) -> "ClassId":
        """Parse ``"source->target"``; l_p ends take p from ``lp(p)`` or ``p``."""
        parts = [s.strip() for s in str(text).split("->")]
        if len(parts) != 2 or not all(parts):
            raise ValueError(f"class must look like 'source->target', got {text!r}")
        ends = []
        for part in parts:
            if part.startswith("lp(") and part.endswith(")"):
                if p is not None and parse_rational(part[3:-1]) != parse_rational(p):
                    raise ValueError("conflicting values of p")
                p = part[3:-1]
                part = "lp"
            elif part == "l1":
                p, part = "1", "lp"
            ends.append(part)
        return cls.of(ends[0], ends[1], p)

    @classmethod
    def of(cls, source: str, target: str, p=None) -> "ClassId":
        if (source, target) not in CLASS_CONDITIONS:
            raise ValueError(f"class ({source} : {target}) is not characterised")
        if "lp" in (source, target):
            if p is None:
                raise ValueError("an l_p class needs p")
            p = parse_rational(p)
            if p < 1:
                raise ValueError(f"p must be >= 1, got {render_rational(p)}")
        else:
            p = None
        return cls(source, target, p)

    @property
    def reverse(self) -> bool:
        return self.target in LAMBDA_SPACES

    def conditions(self) -> tuple:
        names = CLASS_CONDITIONS[(self.source, self.target)]
        if "entries" in names:
            entries = "l1_entries" if self.p == 1 else "lq_rows"
            names = tuple(entries if c == "entries" else c for c in names)
        return names

    def __str__(self) -> str:
        def end(name: str) -> str:
            return f"lp({render_rational(self.p)})" if name == "lp" else name
        return f"{end(self.source)}->{end(self.target)}"


@dataclass(frozen=True)
class ClassReport:
    class_id: ClassId
    conditions: tuple   # (condition id, Verdict) pairs
    overall: Verdict

    def verdict(self, cid: str) -> Verdict:
        for name, v in self.conditions:
            if name == cid:
                return v
        raise KeyError(cid)

    def to_json(self) -> dict:
        return {
            "class": str(self.class_id),
            "conditions": [dict(id=name, **v.to_json()) for name, v in self.conditions],
            "overall": self.overall.to_json(),
        }


# ---------------------------------------------------------------------------
# condition evaluation
# ---------------------------------------------------------------------------

def _power_lo(value: Fraction, p: Fraction) -> Fraction:
    value = abs(value)
    if p.denominator == 1:
        return value ** p.numerator
    return abs_power(value, p).lo


def _downgrade(v: Verdict) -> Verdict:
    if v.status is Status.CERTIFIED_TRUE:
        return v.with_status(Status.EMPIRICAL_TRUE)
    if v.status is Status.CERTIFIED_FALSE:
        return v.with_status(Status.EMPIRICAL_FALSE)
    return v


class _Forward:
    def __init__(self, A: MatrixOracle, lam: LambdaSequence, p: Optional[Fraction],
                 depth: int, window: int, tol: Fraction, threshold: Fraction,
                 horizon: int, row_budget: int) -> None:
        self.A, self.lam, self.p = A, lam, p
        self.depth, self.window, self.tol, self.threshold = depth, window, tol, threshold
        self.horizon, self.row_budget = horizon, row_budget
        self.T = TransformedMatrix(A, lam, depth)
        self.rank = _rank(A)
        self._a: dict = {}

    # per-row families --------------------------------------------------
    def _rows(self) -> range:
        return range(min(self.row_budget, self.depth) + 1)

    def _per_row(self, check: Callable[[int], Verdict], what: str) -> Verdict:
        rows = self._rows()
        parts = [check(n) for n in rows]
        evidence = tuple((n, v.value) for n, v in zip(rows, parts) if v.value is not None)
        combined = conjunction(parts)
        value = max((abs(v) for _, v in evidence), default=None)
        note = f"{what}; rows 0..{rows[-1]} scanned"
        covered = self.A.finite_rows or (self.rank is not None and self.rank <= len(rows))
        status = combined.status
        if not covered:
            status = _downgrade(combined).status
            note += "; later rows not examined (residual risk)"
        elif self.A.finite_rows and status is Status.CERTIFIED_TRUE:
            note += "; every row is finite, so the condition holds for all rows"
        return Verdict(status, depth=self.depth, value=value, evidence=evidence[:12],
                       note=note)

    def c26(self) -> Verdict:
        A, lam = self.A, self.lam

        def sums(n: int) -> Callable[[int], Fraction]:
            prefix = [ZERO]

            def weighted(j: int) -> Fraction:
                while len(prefix) <= j + 1:
                    i = len(prefix) - 1
                    prefix.append(prefix[-1] + fib(i + 1) ** 2 * A.entry(n, i))
                return prefix[j + 1]

            def s(m: int) -> Fraction:
                top = weighted(m)
                return sum((abs(_scale(lam, k) * A.entry(n, k)
                                + _tail_coefficient(lam, k) * (top - weighted(k)))
                            for k in range(m)), ZERO)
            return s

        def row(n: int) -> Verdict:
            extent = A.row_extent(n)
            s = sums(n)
            if extent is not None:
                # abar_nk(m) is frozen once m passes the row extent
                top = max(extent + 1, 1)
                return Verdict(Status.CERTIFIED_TRUE, depth=top,
                               value=max(s(m) for m in range(1, top + 1)))
            return estimate_sup(s, self.depth, self.threshold)

        return self._per_row(row, "sup_m sum_{k<m} |abar_nk(m)| per row")

    def _series(self, weight: Callable[[int], Fraction], what: str) -> Verdict:
        A = self.A

        def row(n: int) -> Verdict:
            extent = A.row_extent(n)
            if extent is not None:
                return Verdict(Status.CERTIFIED_TRUE, depth=extent + 1,
                               value=sum((weight(k) * A.entry(n, k)
                                          for k in range(extent + 1)), ZERO))
            partial: list = []

            def s(m: int) -> Fraction:
                while len(partial) <= m:
                    k = len(partial)
                    partial.append((partial[-1] if partial else ZERO)
                                   + weight(k) * A.entry(n, k))
                return partial[m]
            return estimate_limit(s, self.depth, self.window, self.tol, self.threshold)

        return self._per_row(row, what)

    def c27(self) -> Verdict:
        return self._series(b_sequence, "series a_n0 + sum_k b_k a_nk converges per row")

    def c37(self) -> Verdict:
        return self._series(lambda j: Fraction(fib(j + 1) ** 2),
                            "series sum_j f_{j+1}^2 a_nj converges per row")

    def c28(self) -> Verdict:
        return self._per_row(
            lambda n: row_limit_a_n(self.A, self.lam, n, self.depth, self.window, self.tol,
                                    self.threshold),
            "limit a_n of the scaled row exists")

    def c38(self) -> Verdict:
        A, lam = self.A, self.lam

        def row(n: int) -> Verdict:
            extent = A.row_extent(n)
            if extent is not None:
                return Verdict(Status.CERTIFIED_TRUE, depth=extent + 1,
                               value=max((abs(_scale(lam, k) * A.entry(n, k))
                                          for k in range(extent + 1)), default=ZERO))
            return estimate_sup(lambda k: abs(_scale(lam, k) * A.entry(n, k)), self.depth,
                                self.threshold)

        return self._per_row(row, "scaled row is bounded")

    # the sequence (a_n) ------------------------------------------------
    def a(self, n: int) -> Fraction:
        if n not in self._a:
            self._a[n] = row_limit_a_n(self.A, self.lam, n, self.depth, self.window,
                                       self.tol, self.threshold).value
        return self._a[n]

    def _a_sequence(self, structural: Callable[[], Verdict],
                    sampled: Callable[[], Verdict]) -> Verdict:
        if self.A.finite_rows:
            return structural()
        return sampled()

    def c29(self) -> Verdict:
        p = self.p

        def sampled() -> Verdict:
            partial: list = []

            def s(n: int) -> Fraction:
                while len(partial) <= n:
                    i = len(partial)
                    partial.append((partial[-1] if partial else ZERO) + _power_lo(self.a(i), p))
                return partial[n]
            return _downgrade(estimate_limit(s, self.depth, self.window, self.tol,
                                             self.threshold))

        return self._a_sequence(
            lambda: Verdict(Status.CERTIFIED_TRUE, value=ZERO,
                            note="finite rows: a_n = 0 for every n"), sampled)

    def c31(self) -> Verdict:
        return self._a_sequence(
            lambda: Verdict(Status.CERTIFIED_TRUE, value=ZERO,
                            note="finite rows: a_n = 0 for every n"),
            lambda: _downgrade(estimate_sup(lambda n: abs(self.a(n)), self.depth,
                                            self.threshold)))

    def c49(self) -> Verdict:
        return self._a_sequence(
            lambda: Verdict(Status.CERTIFIED_TRUE, value=ZERO,
                            note="finite rows: a_n = 0 for every n, so a = 0"),
            lambda: _downgrade(estimate_limit(self.a, self.depth, self.window, self.tol,
                                              self.threshold)))

    def c53(self) -> Verdict:
        return _zero_limit(self.c49(), self.tol)

    # sup and limits over rows of abar -----------------------------------
    def c30(self) -> Verdict:
        T = self.T
        settled = None if self.rank is None else max(self.rank - 1, 0)
        v = estimate_sup(T.abs_sum, self.depth, self.threshold, settled_after=settled)
        if not self.A.finite_rows and v.status is Status.CERTIFIED_TRUE:
            v = _downgrade(v)
        return v

    def _column_limits(self, zero: bool) -> Verdict:
        T = self.T
        columns = range(min(self.row_budget, self.horizon) + 1)
        parts = []
        for k in columns:
            v = estimate_limit(lambda n, k=k: T.entry(n, k), self.depth, self.window,
                               self.tol, self.threshold, settled_after=self.rank)
            parts.append(_zero_limit(v, self.tol) if zero else v)
        evidence = tuple((k, v.value) for k, v in zip(columns, parts))
        combined = conjunction(parts)
        status = combined.status
        note = f"column limits alpha_k for k = 0..{columns[-1]}"
        if self.rank is not None and status is Status.CERTIFIED_TRUE:
            note += f"; rows from {self.rank} vanish, so every column limit is 0"
        elif status is Status.CERTIFIED_TRUE:
            status = Status.EMPIRICAL_TRUE
        return Verdict(status, depth=self.depth, evidence=evidence, note=note)

    def c50(self) -> Verdict:
        return self._column_limits(zero=False)

    def c54(self) -> Verdict:
        return self._column_limits(zero=True)

    def c51(self) -> Verdict:
        return estimate_limit(self.T.total, self.depth, self.window, self.tol,
                              self.threshold, settled_after=self.rank)

    def c56(self) -> Verdict:
        return _zero_limit(self.c51(), self.tol)

    def c25(self) -> Verdict:
        check_horizon(self.horizon)
        width = self.horizon + 1
        p = self.p
        vectors = [[self.T.entry(n, k) for k in range(width)] for n in range(self.depth + 1)]
        value, mask = max_subset_abs_sum(vectors, width, p)
        members = mask_members(mask)
        evidence = tuple((k, ZERO) for k in members)
        note = (f"best F = {members} within {{0..{self.horizon}}}, "
                f"rows 0..{self.depth}")
        if value > self.threshold:
            return Verdict(Status.EMPIRICAL_FALSE, depth=self.depth,
                           threshold=self.threshold, value=value, evidence=evidence,
                           note=note + "; exceeds divergence threshold")
        rank = self.rank
        if (rank is not None and p.denominator == 1 and self.depth >= rank - 1
                and max((self.A.row_extent(n) for n in range(rank)), default=-1)
                <= self.horizon):
            return Verdict(Status.CERTIFIED_TRUE, depth=self.depth, value=value,
                           evidence=evidence, note=note + "; every nonzero entry enumerated")
        return Verdict(Status.EMPIRICAL_TRUE, depth=self.depth, threshold=self.threshold,
                       value=value, evidence=evidence, note=note)


class _ComposedRows:
    """Rows of C = Fbar * A, built with lambda_n c_n = lambda_{n-1} c_{n-1} + (step n)."""

    def __init__(self, A: MatrixOracle, lam: LambdaSequence, width: int) -> None:
        self.A, self.lam, self.width = A, lam, width
        self._scaled: list = []

    def _extent(self, n: int) -> int:
        if n < 0:
            return -1
        e = self.A.row_extent(n)
        return self.width if e is None else e

    def row(self, n: int) -> list:
        A, lam, scaled = self.A, self.lam, self._scaled
        while len(scaled) <= n:
            i = len(scaled)
            prev = scaled[-1] if scaled else []
            size = max(len(prev), self._extent(i) + 1, self._extent(i - 1) + 1)
            d = lam.step(i)
            down = Fraction(fib(i), fib(i + 1))
            up = Fraction(fib(i + 1), fib(i)) if i > 0 else ZERO
            row = []
            for k in range(size):
                t = prev[k] if k < len(prev) else ZERO
                t += d * (down * A.entry(i, k) - up * A.entry(i - 1, k))
                row.append(t)
            scaled.append(row)
        return [v / lam(n) for v in scaled[n]]


class _Reverse:
    def __init__(self, A: MatrixOracle, lam: LambdaSequence, p: Optional[Fraction],
                 depth: int, window: int, tol: Fraction, threshold: Fraction,
                 horizon: int, row_budget: int) -> None:
        self.A, self.lam, self.p = A, lam, p
        self.depth, self.window, self.tol, self.threshold = depth, window, tol, threshold
        self.horizon, self.row_budget = horizon, row_budget
        self.C = _ComposedRows(A, lam, depth)
        # Past the last nonzero row of A, row n of C is (lambda_R/lambda_n) * row R.
        self.rank = _rank(A)

    def _note(self) -> str:
        return (f"rows n >= {self.rank} of C are lambda_{self.rank}/lambda_n times row "
                f"{self.rank}")

    def _sup(self, quantity: Callable[[list], Fraction], what: str) -> Verdict:
        v = estimate_sup(lambda n: quantity(self.C.row(n)), self.depth, self.threshold,
                         settled_after=self.rank)
        if v.status is Status.CERTIFIED_TRUE:
            return v.with_status(Status.CERTIFIED_TRUE, f"{what}; {self._note()}")
        return v.with_status(v.status, what if not v.note else f"{what}; {v.note}")

    def c14(self) -> Verdict:
        return self._sup(lambda r: sum((abs(v) for v in r), ZERO), "sup_n sum_k |c_nk|")

    c22 = c14

    def l1_entries(self) -> Verdict:
        return self._sup(lambda r: max((abs(v) for v in r), default=ZERO),
                         "sup_{n,k} |c_nk|")

    def lq_rows(self) -> Verdict:
        q = self.p / (self.p - 1)
        return self._sup(lambda r: sum((_power_lo(v, q) for v in r), ZERO),
                         f"sup_n sum_k |c_nk|^{render_rational(q)}")

    def _limit(self, stream: Callable[[int], Fraction], zero: bool) -> Verdict:
        if self.rank is not None:
            return Verdict(Status.CERTIFIED_TRUE, depth=self.depth, value=ZERO,
                           note=self._note() + " and lambda_n -> infinity")
        v = estimate_limit(stream, self.depth, self.window, self.tol, self.threshold)
        return _zero_limit(v, self.tol) if zero else v

    def _columns(self, zero: bool) -> Verdict:
        columns = range(min(self.row_budget, self.horizon) + 1)

        def entry(n: int, k: int) -> Fraction:
            row = self.C.row(n)
            return row[k] if k < len(row) else ZERO

        parts = [self._limit(lambda n, k=k: entry(n, k), zero) for k in columns]
        evidence = tuple((k, v.value) for k, v in zip(columns, parts) if v.value is not None)
        combined = conjunction(parts)
        status = combined.status
        if status is Status.CERTIFIED_TRUE and self.rank is None:
            status = Status.EMPIRICAL_TRUE
        return Verdict(status, depth=self.depth, evidence=evidence,
                       note=f"column limits of C for k = 0..{columns[-1]}")

    def c13(self) -> Verdict:
        return self._columns(zero=False)

    def c23(self) -> Verdict:
        return self._columns(zero=True)

    def c15(self) -> Verdict:
        return self._limit(lambda n: sum(self.C.row(n), ZERO), zero=False)

    def c24(self) -> Verdict:
        return self._limit(lambda n: sum(self.C.row(n), ZERO), zero=True)


def check_class(A: MatrixOracle, lam: LambdaSequence, class_id, p=None, depth: int = 200,
                window: int = 16, tol: Fraction = Fraction(1, 10 ** 6),
                threshold: Fraction = Fraction(10 ** 9), horizon: int = 10,
                row_budget: int = ROW_BUDGET) -> ClassReport:
    """Evaluate every condition characterising ``class_id`` and combine them."""
    if not isinstance(class_id, ClassId):
        class_id = ClassId.parse(class_id, p)
    check_horizon(horizon)
    if depth < window:
        raise ValueError("need depth >= window")
    kind = _Reverse if class_id.reverse else _Forward
    evaluator = kind(A, lam, class_id.p, depth, window, Fraction(tol), Fraction(threshold),
                     horizon, row_budget)
    results = tuple((cid, getattr(evaluator, cid)()) for cid in class_id.conditions())
    overall = conjunction([v for _, v in results],
                          note=" & ".join(cid for cid, _ in results))
    return ClassReport(class_id, results, overall)
