"""Built-in verification suite: structural identities plus the witness table."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import matrices
from .compactness import tail_norm
from .duals import abar_k_n, t_matrix_entry
from .matrices import MatrixOracle, a00_only, fbar_inv, row_e0, verify_inverse
from .numerics import (
    ZERO,
    LambdaSequence,
    cassini_residual,
    fib,
    fib_sum_residual,
    golden_ratio_gap,
)
from .spaces import (
    WITNESS_IDS,
    FbarStream,
    Space,
    b_sequence,
    builtin_sequence,
    fhat_transform,
    inclusion_witness,
    inverse_sequence,
    membership,
    space_norm,
    table_sequence,
)

CORRUPTIONS = ("fbar_inv",)

LAMBDAS = (LambdaSequence.linear(), LambdaSequence.affine(2, 1), LambdaSequence.geometric(2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _perturbed_inverse(lam: LambdaSequence) -> MatrixOracle:
    good = fbar_inv(lam)

    def entry(n: int, k: int) -> Fraction:
        bump = Fraction(1, 10 ** 9) if (n, k) == (3, 1) else ZERO
        return good.entry(n, k) + bump
    return MatrixOracle(entry, "perturbed inverse", is_triangle=True, extent=lambda n: n)


def _fibonacci(depth: int, corrupt: Optional[str]) -> str:
    top = max(depth, 2)
    bad = [n for n in range(1, top + 1) if cassini_residual(n) or fib_sum_residual(n)]
    if bad:
        return f"nonzero residual at n = {bad[0]}"
    gaps = [golden_ratio_gap(n) for n in range(2, min(top, 60) + 1)]
    for n, (a, b) in enumerate(zip(gaps, gaps[1:]), start=2):
        if not b.hi < a.lo:
            return f"gap enclosures not strictly decreasing at n = {n + 1}"
    return ""


def _inverse(depth: int, corrupt: Optional[str]) -> str:
    order = min(max(depth, 4), 48)
    for lam in LAMBDAS:
        inverse = _perturbed_inverse(lam) if corrupt == "fbar_inv" else None
        v = verify_inverse(lam, order, inverse=inverse)
        if not v.holds:
            return f"lambda {lam.to_spec()}: {v.note}"
    return ""


def _witnesses(depth: int, corrupt: Optional[str]) -> str:
    lam = LambdaSequence.linear()
    top = min(max(depth, 4), 64)
    x = builtin_sequence("fib_square", lam)
    fb = FbarStream(x, lam)
    for n in range(top + 1):
        if fhat_transform(x, n) != (1 if n == 0 else 0):
            return f"Fhat(f_(k+1)^2) differs from e^(0) at n = {n}"
        if fb(n) != lam(0) / lam(n):
            return f"Fbar_n(f_(k+1)^2) differs from lambda_0/lambda_n at n = {n}"
    fb = FbarStream(builtin_sequence("b_seq", lam), lam)
    bad = [n for n in range(top + 1) if fb(n) != 1]
    if bad:
        return f"Fbar(b) differs from e at n = {bad[0]}"
    for k in range(min(12, top) + 1):
        fb = FbarStream(builtin_sequence(f"basis({k})", lam), lam)
        bad = [n for n in range(min(top, 48) + 1) if fb(n) != (1 if n == k else 0)]
        if bad:
            return f"Fbar(b^({k})) differs from e^({k}) at n = {bad[0]}"
    return ""


def _roundtrip(depth: int, corrupt: Optional[str]) -> str:
    rng = random.Random(20240601)
    lam = LambdaSequence.linear()
    support = min(max(depth, 2), 24)
    for trial in range(10):
        values = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(support)]
        y = table_sequence(values)
        x = inverse_sequence(y, lam)
        fb = FbarStream(x, lam)
        bad = [n for n in range(support + 4) if fb(n) != y(n)]
        if bad:
            return f"trial {trial}: Fbar(inverse(y)) differs from y at n = {bad[0]}"
        norm = space_norm(x, lam, support + 4).value
        if norm != max(abs(v) for v in values):
            return f"trial {trial}: norm {norm} differs from max |y_n|"
    return ""


def _non_absolute(depth: int, corrupt: Optional[str]) -> str:
    lam = LambdaSequence.linear()
    signed = space_norm(builtin_sequence("sign_witness", lam), lam, max(depth, 4)).value
    absolute = space_norm(builtin_sequence("sign_witness_abs", lam), lam, max(depth, 4)).value
    if (signed, absolute) != (Fraction(3, 2), Fraction(5, 3)):
        return f"norms {signed}, {absolute}; expected 3/2, 5/3"
    return ""


def _dual_identities(depth: int, corrupt: Optional[str]) -> str:
    rng = random.Random(7)
    lam = LambdaSequence.linear()
    top = min(max(depth, 4), 60)
    for trial in range(5):
        a = table_sequence([Fraction(rng.randint(-5, 5), rng.randint(1, 5))
                            for _ in range(rng.randint(1, 12))])
        y = table_sequence([Fraction(rng.randint(-5, 5), rng.randint(1, 5))
                            for _ in range(rng.randint(1, 12))])
        x = inverse_sequence(y, lam)
        lhs = ZERO
        for n in range(top + 1):
            lhs += a(n) * x(n)
            diag = lam(n) / lam.step(n) * Fraction(fib(n + 1), fib(n))
            rhs = (sum((abar_k_n(a, lam, k, n) * y(k) for k in range(n)), ZERO)
                   + diag * a(n) * y(n))
            if lhs != rhs:
                return f"trial {trial}: Abel identity fails at n = {n}"
            series = sum((b_sequence(k) * a(k) for k in range(n + 1)), ZERO)
            if series != sum((t_matrix_entry(a, lam, n, k) for k in range(n + 1)), ZERO):
                return f"trial {trial}: row-sum identity fails at n = {n}"
    return ""


def _tail_monotone(depth: int, corrupt: Optional[str]) -> str:
    lam = LambdaSequence.linear()
    top = min(max(depth, 4), 40)
    fixtures = [a00_only(), row_e0(), matrices.sparse([(0, 0, 1), (2, 1, -3), (3, 3, "1/2")])]
    for A in fixtures:
        values = [tail_norm(A, lam, m, top) for m in range(min(top, 10))]
        if any(b > a for a, b in zip(values, values[1:])):
            return f"{A.description}: tail norms increase"
    return ""


def _witness_table(depth: int, corrupt: Optional[str]) -> str:
    lam = LambdaSequence.linear()
    # divergence of fib_square needs f_(n+1)^2 past the threshold
    d = max(depth, 60)
    for wid in WITNESS_IDS:
        name = "basis(3)" if wid == "basis(k)" else wid
        w = inclusion_witness(name, lam)
        for space, expected in w.expected.items():
            v = membership(w.oracle, Space.parse(space), lam, d)
            if v.holds is not expected:
                return f"{name} in {space}: got {v.status.value}, expected {expected}"
    return ""


CHECKS: tuple = (
    ("fibonacci_identities", _fibonacci),
    ("inverse_identity", _inverse),
    ("transform_witnesses", _witnesses),
    ("isomorphism_roundtrip", _roundtrip),
    ("non_absolute_norm", _non_absolute),
    ("dual_identities", _dual_identities),
    ("tail_norm_monotone", _tail_monotone),
    ("witness_table", _witness_table),
)


def run_selftest(depth: int = 200, corrupt: Optional[str] = None) -> list:
    """Run every check; ``corrupt`` swaps in a damaged table to test the suite."""
    if corrupt is not None and corrupt not in CORRUPTIONS:
        raise ValueError(f"unknown corruption {corrupt!r}; known: {list(CORRUPTIONS)}")
    results = []
    for name, check in CHECKS:
        detail = check(depth, corrupt)
        results.append(CheckResult(name, not detail, detail))
    return results
