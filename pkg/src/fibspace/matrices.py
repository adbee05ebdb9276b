"""Lazy infinite matrices and the concrete Fibonacci matrices.

A :class:`MatrixOracle` is addressed entry by entry.  Optional structural
facts (row extents, a bound past which every row vanishes) let downstream
checks certify results instead of sampling them.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .numerics import (
    ONE,
    ZERO,
    LambdaSequence,
    Status,
    Verdict,
    fib,
    parse_rational,
    render_rational,
)


class NotATriangle(ValueError):
    def __init__(self, n: int, k: int, reason: str) -> None:
        super().__init__(f"not a triangle: {reason} at (n={n}, k={k})")
        self.witness = (n, k)


@dataclass(eq=False)
class MatrixOracle:
    """Entry-addressable infinite matrix A = (a_nk), n, k >= 0.

    ``extent(n)`` returns the last column that may be nonzero in row n (-1 for
    an empty row) or None when rows are not known to be finite.
    ``zero_from`` is a row index from which every row is identically zero.
    """

    entry_fn: Callable[[int, int], Fraction]
    description: str
    is_triangle: bool = False
    extent: Optional[Callable[[int], int]] = None
    zero_from: Optional[int] = None
    spec: Optional[dict] = None
    _memo: dict = field(default_factory=dict, repr=False)

    def entry(self, n: int, k: int) -> Fraction:
        if n < 0 or k < 0:
            return ZERO
        key = (n, k)
        try:
            return self._memo[key]
        except KeyError:
            value = Fraction(self.entry_fn(n, k))
            self._memo[key] = value
            return value

    __call__ = entry

    @property
    def finite_rows(self) -> bool:
        return self.extent is not None

    def row_extent(self, n: int) -> Optional[int]:
        if self.zero_from is not None and n >= self.zero_from:
            return -1
        if self.extent is None:
            return None
        return self.extent(n)

    def row(self, n: int, cols: int) -> list[Fraction]:
        """Entries a_n0 .. a_n,cols-1."""
        return [self.entry(n, k) for k in range(cols)]


# ---------------------------------------------------------------------------
# entry formulas
# ---------------------------------------------------------------------------

def fhat_entry(n: int, k: int) -> Fraction:
    """Two-band Fibonacci difference matrix."""
    if n < 0 or k < 0:
        return ZERO
    if k == n:
        return Fraction(fib(n), fib(n + 1))
    if k == n - 1:
        return -Fraction(fib(n + 1), fib(n))
    return ZERO


def fbar_entry(lam: LambdaSequence, n: int, k: int) -> Fraction:
    """Entry of the lambda-weighted transform matrix (a triangle)."""
    if n < 0 or k < 0 or k > n:
        return ZERO
    if k == n:
        return lam.step(n) * Fraction(fib(n), fib(n + 1)) / lam(n)
    return (lam.step(k) * Fraction(fib(k), fib(k + 1))
            - lam.step(k + 1) * Fraction(fib(k + 2), fib(k + 1))) / lam(n)


def _inverse_column_weight(lam: LambdaSequence, k: int) -> Fraction:
    # lambda_k [1/((lam_k - lam_{k-1}) f_k f_{k+1}) - 1/((lam_{k+1} - lam_k) f_{k+1} f_{k+2})]
    return lam(k) * (Fraction(1, fib(k) * fib(k + 1)) / lam.step(k)
                     - Fraction(1, fib(k + 1) * fib(k + 2)) / lam.step(k + 1))


def _inverse_diagonal_weight(lam: LambdaSequence, k: int) -> Fraction:
    return lam(k) / (lam.step(k) * fib(k) * fib(k + 1))


def fbar_inv_entry(lam: LambdaSequence, n: int, k: int) -> Fraction:
    """Closed-form entry of the inverse triangle."""
    if n < 0 or k < 0 or k > n:
        return ZERO
    square = fib(n + 1) ** 2
    if k == n:
        return square * _inverse_diagonal_weight(lam, n)
    return square * _inverse_column_weight(lam, k)


def compose_entry(A: MatrixOracle, lam: LambdaSequence, n: int, k: int) -> Fraction:
    """Entry of the product of the weighted transform with A (a_{-1,k} = 0)."""
    if n < 0 or k < 0:
        return ZERO
    total = ZERO
    for i in range(n + 1):
        term = Fraction(fib(i), fib(i + 1)) * A.entry(i, k)
        if i > 0:
            term -= Fraction(fib(i + 1), fib(i)) * A.entry(i - 1, k)
        total += lam.step(i) * term
    return total / lam(n)


# ---------------------------------------------------------------------------
# builtin oracles
# ---------------------------------------------------------------------------

def _lower_extent(n: int) -> int:
    return n


def fhat() -> MatrixOracle:
    return MatrixOracle(fhat_entry, "Fibonacci difference matrix", is_triangle=True,
                        extent=_lower_extent, spec={"kind": "builtin", "name": "fhat"})


def fbar(lam: LambdaSequence) -> MatrixOracle:
    return MatrixOracle(lambda n, k: fbar_entry(lam, n, k),
                        "lambda-weighted Fibonacci transform", is_triangle=True,
                        extent=_lower_extent, spec={"kind": "builtin", "name": "fbar"})


def fbar_inv(lam: LambdaSequence) -> MatrixOracle:
    return MatrixOracle(lambda n, k: fbar_inv_entry(lam, n, k),
                        "inverse of the lambda-weighted Fibonacci transform",
                        is_triangle=True, extent=_lower_extent,
                        spec={"kind": "builtin", "name": "fbar_inv"})


def identity() -> MatrixOracle:
    return MatrixOracle(lambda n, k: ONE if n == k else ZERO, "identity",
                        is_triangle=True, extent=_lower_extent,
                        spec={"kind": "builtin", "name": "identity"})


def zero() -> MatrixOracle:
    return MatrixOracle(lambda n, k: ZERO, "zero matrix", extent=lambda n: -1,
                        zero_from=0, spec={"kind": "builtin", "name": "zero"})


def sparse(entries: Sequence) -> MatrixOracle:
    """Finitely many listed entries ``(n, k, value)``; everything else is 0."""
    table: dict = {}
    for item in entries:
        n, k, value = item
        n, k = int(n), int(k)
        if n < 0 or k < 0:
            raise ValueError(f"negative index in sparse entry {item!r}")
        value = parse_rational(value)
        if value:
            table[(n, k)] = value
        else:
            table.pop((n, k), None)
    extents: dict = {}
    for n, k in table:
        extents[n] = max(extents.get(n, -1), k)
    zero_from = max(extents, default=-1) + 1
    spec = {"kind": "sparse",
            "entries": [[n, k, render_rational(v)] for (n, k), v in sorted(table.items())]}
    return MatrixOracle(lambda n, k: table.get((n, k), ZERO), "sparse matrix",
                        extent=lambda n: extents.get(n, -1), zero_from=zero_from, spec=spec)


def a00_only() -> MatrixOracle:
    oracle = sparse([(0, 0, 1)])
    oracle.description = "single entry a_00 = 1"
    oracle.spec = {"kind": "builtin", "name": "a00_only"}
    return oracle


def row_constant(column: int, value) -> MatrixOracle:
    """Every row equals value * e^(column)."""
    value = parse_rational(value)
    column = int(column)
    if column < 0:
        raise ValueError("column must be >= 0")
    extent = (lambda n: column) if value else (lambda n: -1)
    return MatrixOracle(lambda n, k: value if k == column else ZERO,
                        f"every row is {render_rational(value)} e^({column})",
                        extent=extent, zero_from=None if value else 0,
                        spec={"kind": "row_constant",
                              "row_value_at": [column, render_rational(value)]})


def row_e0() -> MatrixOracle:
    oracle = row_constant(0, 1)
    oracle.spec = {"kind": "builtin", "name": "row_e0"}
    return oracle


BAND_RULES: dict = {
    "ones": lambda n, k: ONE,
    "fhat": fhat_entry,
    "alternating": lambda n, k: ONE if (n - k) % 2 == 0 else -ONE,
    "harmonic": lambda n, k: Fraction(1, n + 1),
}


def banded(lo: int, hi: int, rule: str) -> MatrixOracle:
    """Entries rule(n, k) on the band n + lo <= k <= n + hi, zero elsewhere."""
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError("band must satisfy lo <= hi")
    try:
        fn = BAND_RULES[rule]
    except KeyError:
        raise ValueError(f"unknown band rule {rule!r}; known: {sorted(BAND_RULES)}") from None
    return MatrixOracle(lambda n, k: fn(n, k) if n + lo <= k <= n + hi else ZERO,
                        f"banded [{lo},{hi}] rule {rule}", is_triangle=False,
                        extent=lambda n: n + hi if n + hi >= 0 else -1,
                        spec={"kind": "banded", "band": [lo, hi], "rule": rule})


def composed(A: MatrixOracle, lam: LambdaSequence) -> MatrixOracle:
    """The matrix C with c_nk = compose_entry(A, lam, n, k)."""
    if A.extent is not None:
        def extent(n: int) -> int:
            return max((A.row_extent(i) for i in range(n + 1)), default=-1)
    else:
        extent = None
    return MatrixOracle(lambda n, k: compose_entry(A, lam, n, k),
                        f"weighted transform applied to ({A.description})",
                        extent=extent, zero_from=0 if A.zero_from == 0 else None)


def row_differenced(A: MatrixOracle) -> MatrixOracle:
    """Rows a_n - a_{n-1} (with a_{-1} = 0)."""
    if A.extent is not None:
        def extent(n: int) -> int:
            return max(A.row_extent(n), A.row_extent(n - 1) if n > 0 else -1)
    else:
        extent = None
    zero_from = None if A.zero_from is None else A.zero_from + 1
    return MatrixOracle(lambda n, k: A.entry(n, k) - A.entry(n - 1, k),
                        f"row differences of ({A.description})", extent=extent,
                        zero_from=zero_from)


BUILTIN_MATRICES = ("zero", "identity", "a00_only", "row_e0", "fhat", "fbar", "fbar_inv")


def builtin_matrix(name: str, lam: LambdaSequence) -> MatrixOracle:
    factories = {
        "zero": zero, "identity": identity, "a00_only": a00_only, "row_e0": row_e0,
        "fhat": fhat, "fbar": lambda: fbar(lam), "fbar_inv": lambda: fbar_inv(lam),
    }
    try:
        return factories[name]()
    except KeyError:
        raise ValueError(f"unknown builtin matrix {name!r}; known: {list(BUILTIN_MATRICES)}") from None


def matrix_from_spec(spec: dict, lam: LambdaSequence) -> MatrixOracle:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("matrix spec must be an object with a 'kind' key")
    kind = spec["kind"]
    if kind == "builtin":
        return builtin_matrix(spec.get("name", ""), lam)
    if kind == "sparse":
        return sparse(spec.get("entries", []))
    if kind == "banded":
        band = spec.get("band")
        if not isinstance(band, list) or len(band) != 2:
            raise ValueError("banded spec needs 'band': [lo, hi]")
        return banded(band[0], band[1], spec.get("rule", ""))
    if kind == "row_constant":
        at = spec.get("row_value_at")
        if not isinstance(at, list) or len(at) != 2:
            raise ValueError("row_constant spec needs 'row_value_at': [k, \"p/q\"]")
        return row_constant(at[0], at[1])
    raise ValueError(f"unknown matrix kind {kind!r}")


# ---------------------------------------------------------------------------
# dense truncations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DenseTruncation:
    order: int
    rows: tuple

    def __getitem__(self, nk) -> Fraction:
        n, k = nk
        return self.rows[n][k]

    def __matmul__(self, other: "DenseTruncation") -> "DenseTruncation":
        if self.order != other.order:
            raise ValueError("order mismatch")
        N = self.order
        cols = list(zip(*other.rows))
        rows = tuple(
            tuple(sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in cols)
            for row in self.rows)
        return DenseTruncation(N, rows)

    def is_identity(self) -> bool:
        return all(v == (ONE if n == k else ZERO)
                   for n, row in enumerate(self.rows) for k, v in enumerate(row))

    def first_mismatch_with_identity(self) -> Optional[tuple]:
        for n, row in enumerate(self.rows):
            for k, v in enumerate(row):
                if v != (ONE if n == k else ZERO):
                    return (n, k, v)
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.rows:
            writer.writerow([render_rational(v) for v in row])
        return buf.getvalue()

    def to_lists(self) -> list:
        return [list(row) for row in self.rows]


def truncate(A: MatrixOracle, N: int) -> DenseTruncation:
    """Leading N x N block; triangles are validated on the way."""
    if N < 1:
        raise ValueError("order must be >= 1")
    rows = []
    for n in range(N):
        row = tuple(A.entry(n, k) for k in range(N))
        if A.is_triangle:
            if row[n] == 0:
                raise NotATriangle(n, n, "zero diagonal entry")
            for k in range(n + 1, N):
                if row[k] != 0:
                    raise NotATriangle(n, k, "nonzero entry above the diagonal")
        rows.append(row)
    return DenseTruncation(N, tuple(rows))


def verify_inverse(lam: LambdaSequence, N: int,
                   inverse: Optional[MatrixOracle] = None) -> Verdict:
    """Exact check that the closed-form inverse inverts the truncated triangle.

    For triangles the leading N x N block of a product depends only on the
    leading blocks of the factors, so equality here is a certificate for the
    block.  ``inverse`` substitutes a different candidate (used by the
    self-test negative control).
    """
    if N < 1:
        raise ValueError("order must be >= 1")
    forward = truncate(fbar(lam), N)
    backward = truncate(inverse if inverse is not None else fbar_inv(lam), N)
    for label, product in (("inv*fbar", backward @ forward), ("fbar*inv", forward @ backward)):
        bad = product.first_mismatch_with_identity()
        if bad is not None:
            n, k, v = bad
            return Verdict(Status.CERTIFIED_FALSE, depth=N, value=v, evidence=((n, v),),
                           note=f"{label} differs from identity at ({n}, {k})")
    return Verdict(Status.CERTIFIED_TRUE, depth=N,
                   note=f"both {N}x{N} products equal the identity")
