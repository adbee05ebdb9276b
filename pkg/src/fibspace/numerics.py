"""Exact scalars, Fibonacci numbers, lambda sequences and finite-depth verdicts.

Everything here works over :class:`fractions.Fraction`.  Floating point is
only used when a report renders a value for humans.
"""

from __future__ import annotations

import enum
import math
import threading
from decimal import Decimal, localcontext
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

Rational = Fraction
ScalarStream = Callable[[int], Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# rational parsing / rendering
# ---------------------------------------------------------------------------

def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer, or a decimal literal into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {text!r}") from exc
    raise ValueError(f"not a rational: {text!r}")


def render_rational(value: Fraction) -> str:
    """Canonical ``"p/q"`` form; integers drop the denominator."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_decimal(value: Fraction, digits: int = 12) -> str:
    """Decimal rendering with ``digits`` significant digits (display only)."""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        shown = Decimal(value.numerator) / Decimal(value.denominator)
    return format(shown, "g")


# ---------------------------------------------------------------------------
# Fibonacci numbers
# ---------------------------------------------------------------------------

class FibonacciCache:
    """Append-only table of f_0, f_1, ... with f_0 = f_1 = 1."""

    def __init__(self) -> None:
        self._values = [1, 1]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"Fibonacci index must be >= 0, got {n}")
        values = self._values
        if n < len(values):
            return values[n]
        with self._lock:
            values = self._values
            while len(values) <= n:
                values.append(values[-1] + values[-2])
            return values[n]

    def __len__(self) -> int:
        return len(self._values)


fib = FibonacciCache()


def cassini_residual(n: int) -> Fraction:
    """f_{n-1} f_{n+1} - f_n^2 - (-1)^{n+1}; zero for every n >= 1."""
    if n < 1:
        raise ValueError("Cassini's formula is stated for n >= 1")
    return Fraction(fib(n - 1) * fib(n + 1) - fib(n) ** 2 - (-1) ** (n + 1))


def fib_sum_residual(n: int) -> Fraction:
    """sum_{k<=n} f_k - (f_{n+2} - 1); zero for every n >= 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Fraction(sum(fib(k) for k in range(n + 1)) - (fib(n + 2) - 1))


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi


def sqrt5_enclosure(bits: int) -> Interval:
    root = math.isqrt(5 << (2 * bits))
    scale = Fraction(1, 1 << bits)
    return Interval(root * scale, (root + 1) * scale)


def golden_ratio_gap(n: int, width: Fraction = Fraction(1, 10 ** 12)) -> Interval:
    """Rational enclosure of |f_{n+1}/f_n - (1 + sqrt 5)/2|.

    The enclosure of sqrt 5 is refined until the result is narrower than
    ``width`` and than a 2**-20 fraction of its own lower end, so that
    enclosures at neighbouring n can be compared.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ratio = Fraction(fib(n + 1), fib(n))
    bits = 64
    while True:
        root5 = sqrt5_enclosure(bits)
        phi_lo, phi_hi = (1 + root5.lo) / 2, (1 + root5.hi) / 2
        d_lo, d_hi = ratio - phi_hi, ratio - phi_lo
        if d_lo > 0:
            gap = Interval(d_lo, d_hi)
        elif d_hi < 0:
            gap = Interval(-d_hi, -d_lo)
        else:
            gap = None
        if gap is not None and gap.width < width and gap.width * (1 << 20) < gap.lo:
            return gap
        bits *= 2


# ---------------------------------------------------------------------------
# fractional powers
# ---------------------------------------------------------------------------

def _iroot(value: int, k: int) -> int:
    """floor(value ** (1/k)) for value >= 0."""
    if value < 2 or k == 1:
        return value
    x = 1 << -(-value.bit_length() // k)
    while True:
        y = ((k - 1) * x + value // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > value:
        x -= 1
    while (x + 1) ** k <= value:
        x += 1
    return x


def abs_power(value: Fraction, p: Fraction, bits: int = 64) -> Interval:
    """Enclosure of |value|**p; exact (zero width) when p is an integer.

    For p = a/b the width is at most 2**-bits / denominator, well below 1e-15.
    """
    value = abs(Fraction(value))
    p = Fraction(p)
    if p.denominator == 1:
        exact = value ** p.numerator
        return Interval(exact, exact)
    powered = value ** p.numerator
    num, den = powered.numerator, powered.denominator
    b = p.denominator
    # (num/den)^(1/b) = (num * den^(b-1))^(1/b) / den
    root = _iroot((num * den ** (b - 1)) << (b * bits), b)
    scale = Fraction(1, den << bits)
    return Interval(root * scale, (root + 1) * scale)


# ---------------------------------------------------------------------------
# lambda sequences
# ---------------------------------------------------------------------------

class LambdaHorizonError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaSequence:
    """Strictly increasing positive weights lambda_k -> infinity, lambda_{-1} = 0.

    Families: ``linear`` (k + 1), ``affine`` (alpha k + beta), ``geometric``
    (ratio ** (k + 1)) and ``custom`` (a finite table, optionally continued
    arithmetically with the last step when ``extend == "arithmetic"``).
    """

    family: str = "linear"
    alpha: Fraction = ONE
    beta: Fraction = ONE
    ratio: Fraction = Fraction(2)
    values: tuple = ()
    extend: Optional[str] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        if self.family == "affine":
            if self.alpha <= 0 or self.beta <= 0:
                raise ValueError("affine lambda needs alpha > 0 and beta > 0")
        elif self.family == "geometric":
            if self.ratio <= 1:
                raise ValueError("geometric lambda needs ratio > 1")
        elif self.family == "custom":
            if not self.values:
                raise ValueError("custom lambda needs at least one value")
            prev = ZERO
            for k, v in enumerate(self.values):
                if v <= prev:
                    raise ValueError(
                        f"custom lambda not strictly increasing and positive at k={k}")
                prev = v
            if self.extend not in (None, "arithmetic"):
                raise ValueError(f"unknown extension rule {self.extend!r}")
        elif self.family != "linear":
            raise ValueError(f"unknown lambda family {self.family!r}")

    @classmethod
    def linear(cls) -> "LambdaSequence":
        return cls("linear")

    @classmethod
    def affine(cls, alpha, beta) -> "LambdaSequence":
        return cls("affine", alpha=parse_rational(alpha), beta=parse_rational(beta))

    @classmethod
    def geometric(cls, ratio) -> "LambdaSequence":
        return cls("geometric", ratio=parse_rational(ratio))

    @classmethod
    def custom(cls, values: Iterable, extend: Optional[str] = None) -> "LambdaSequence":
        return cls("custom", values=tuple(parse_rational(v) for v in values), extend=extend)

    def __call__(self, k: int) -> Fraction:
        if k < -1:
            raise ValueError(f"lambda index must be >= -1, got {k}")
        if k == -1:
            return ZERO
        try:
            return self._cache[k]
        except KeyError:
            pass
        if self.family == "linear":
            value = Fraction(k + 1)
        elif self.family == "affine":
            value = self.alpha * k + self.beta
        elif self.family == "geometric":
            value = self.ratio ** (k + 1)
        else:
            table = self.values
            if k < len(table):
                value = table[k]
            elif self.extend == "arithmetic":
                step = table[-1] - (table[-2] if len(table) > 1 else ZERO)
                value = table[-1] + step * (k - len(table) + 1)
            else:
                raise LambdaHorizonError(
                    f"lambda horizon exceeded: k={k} but only {len(table)} values given")
        self._cache[k] = value
        return value

    def step(self, k: int) -> Fraction:
        """lambda_k - lambda_{k-1} (positive for every k >= 0)."""
        return self(k) - self(k - 1)

    @property
    def liminf_ratio_one(self) -> Optional[bool]:
        """Whether liminf lambda_{n+1}/lambda_n = 1 (None when unknown)."""
        if self.family in ("linear", "affine"):
            return True
        if self.family == "geometric":
            return False
        return True if self.extend == "arithmetic" else None

    def to_spec(self) -> dict:
        if self.family == "linear":
            return {"family": "linear"}
        if self.family == "affine":
            return {"family": "affine", "alpha": render_rational(self.alpha),
                    "beta": render_rational(self.beta)}
        if self.family == "geometric":
            return {"family": "geometric", "ratio": render_rational(self.ratio)}
        spec = {"family": "custom", "values": [render_rational(v) for v in self.values]}
        if self.extend:
            spec["extend"] = self.extend
        return spec

    @classmethod
    def from_spec(cls, spec: dict) -> "LambdaSequence":
        if not isinstance(spec, dict) or "family" not in spec:
            raise ValueError("lambda spec must be an object with a 'family' key")
        family = spec["family"]
        if family == "linear":
            return cls.linear()
        if family == "affine":
            return cls.affine(spec.get("alpha", "1"), spec.get("beta", "1"))
        if family == "geometric":
            return cls.geometric(spec.get("ratio", "2"))
        if family == "custom":
            return cls.custom(spec.get("values", []), spec.get("extend"))
        raise ValueError(f"unknown lambda family {family!r}")


def lambda_value(lam: LambdaSequence, k: int) -> Fraction:
    return lam(k)


# ---------------------------------------------------------------------------
# verdicts and finite-depth estimation
# ---------------------------------------------------------------------------

class Status(str, enum.Enum):
    CERTIFIED_TRUE = "certified_true"
    CERTIFIED_FALSE = "certified_false"
    EMPIRICAL_TRUE = "empirical_true"
    EMPIRICAL_FALSE = "empirical_false"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a finite-depth decision.

    ``value`` carries the quantity the check produced: a limit candidate, a
    supremum lower bound, or None.
    """

    status: Status
    depth: Optional[int] = None
    threshold: Optional[Fraction] = None
    value: Optional[Fraction] = None
    evidence: tuple = ()
    note: str = ""

    @property
    def holds(self) -> Optional[bool]:
        if self.status in (Status.CERTIFIED_TRUE, Status.EMPIRICAL_TRUE):
            return True
        if self.status in (Status.CERTIFIED_FALSE, Status.EMPIRICAL_FALSE):
            return False
        return None

    @property
    def certified(self) -> bool:
        return self.status in (Status.CERTIFIED_TRUE, Status.CERTIFIED_FALSE)

    def with_status(self, status: Status, note: str = "") -> "Verdict":
        return Verdict(status, self.depth, self.threshold, self.value, self.evidence,
                       note or self.note)

    def to_json(self) -> dict:
        out = {"status": self.status.value}
        if self.depth is not None:
            out["depth"] = self.depth
        if self.threshold is not None:
            out["threshold"] = render_rational(self.threshold)
        if self.value is not None:
            out["value"] = render_rational(self.value)
            out["value_decimal"] = render_decimal(self.value)
        if self.evidence:
            out["evidence"] = [[i, render_rational(v)] for i, v in self.evidence]
        if self.note:
            out["note"] = self.note
        return out


def certified(holds: bool, value: Optional[Fraction] = None, note: str = "",
              evidence: Sequence = (), depth: Optional[int] = None) -> Verdict:
    status = Status.CERTIFIED_TRUE if holds else Status.CERTIFIED_FALSE
    return Verdict(status, depth=depth, value=value, evidence=tuple(evidence), note=note)


def conjunction(verdicts: Iterable[Verdict], note: str = "") -> Verdict:
    """Conservative AND: certified only when every part is certified."""
    verdicts = list(verdicts)
    depth = max((v.depth for v in verdicts if v.depth is not None), default=None)
    statuses = {v.status for v in verdicts}
    if Status.CERTIFIED_FALSE in statuses:
        status = Status.CERTIFIED_FALSE
    elif Status.EMPIRICAL_FALSE in statuses:
        status = Status.EMPIRICAL_FALSE
    elif Status.INDETERMINATE in statuses:
        status = Status.INDETERMINATE
    elif statuses <= {Status.CERTIFIED_TRUE}:
        status = Status.CERTIFIED_TRUE
    else:
        status = Status.EMPIRICAL_TRUE
    return Verdict(status, depth=depth, note=note)


def _samples(pairs: Sequence, limit: int = 8) -> tuple:
    pairs = list(pairs)
    if len(pairs) <= limit:
        return tuple(pairs)
    return tuple(pairs[:2] + pairs[-(limit - 2):])


def estimate_limit(s: ScalarStream, depth: int = 200, window: int = 16,
                   tol: Fraction = Fraction(1, 10 ** 6),
                   threshold: Fraction = Fraction(10 ** 9),
                   settled_after: Optional[int] = None) -> Verdict:
    """Decide convergence of ``s`` from the window of indices depth-window..depth.

    ``settled_after`` is a caller guarantee that s is constant from that index
    on; when it lies within the scanned depth the verdict is certified and
    ``value`` is the exact limit.
    """
    if not depth >= window >= 2:
        raise ValueError("need depth >= window >= 2")
    tol, threshold = Fraction(tol), Fraction(threshold)
    start = depth - window
    values = [(n, s(n)) for n in range(start, depth + 1)]
    evidence = _samples(values)
    last = values[-1][1]
    if settled_after is not None and settled_after <= depth:
        settled = s(max(settled_after, 0))
        if settled == last and all(v == last for n, v in values if n >= settled_after):
            return Verdict(Status.CERTIFIED_TRUE, depth=depth, value=last,
                           evidence=evidence, note=f"constant from index {settled_after}")
    if any(abs(v) > threshold for _, v in values):
        return Verdict(Status.EMPIRICAL_FALSE, depth=depth, threshold=threshold,
                       value=last, evidence=evidence, note="exceeds divergence threshold")
    nums = [v for _, v in values]
    if max(nums) - min(nums) <= tol:
        return Verdict(Status.EMPIRICAL_TRUE, depth=depth, value=last, evidence=evidence)
    return Verdict(Status.INDETERMINATE, depth=depth, threshold=threshold, value=last,
                   evidence=evidence, note="window not settled within tolerance")


def estimate_sup(s: ScalarStream, depth: int = 200,
                 threshold: Fraction = Fraction(10 ** 9),
                 settled_after: Optional[int] = None) -> Verdict:
    """Running maximum of s over 0..depth as an exact lower bound of sup s.

    Stops early with ``empirical_false`` once the maximum passes
    ``threshold``.  ``settled_after`` is a caller guarantee that no term past
    that index exceeds the maximum up to it (e.g. s is constant or
    nonincreasing from there); within depth it makes the maximum the true
    supremum and the verdict certified.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    threshold = Fraction(threshold)
    best = None
    arg = 0
    for n in range(depth + 1):
        v = s(n)
        if best is None or v > best:
            best, arg = v, n
            if best > threshold:
                return Verdict(Status.EMPIRICAL_FALSE, depth=n, threshold=threshold,
                               value=best, evidence=((arg, best),),
                               note="running maximum exceeds divergence threshold")
    evidence = ((arg, best), (depth, s(depth)))
    if settled_after is not None and settled_after <= depth:
        return Verdict(Status.CERTIFIED_TRUE, depth=depth, value=best, evidence=evidence,
                       note=f"supremum attained by index {settled_after}")
    return Verdict(Status.EMPIRICAL_TRUE, depth=depth, threshold=threshold, value=best,
                   evidence=evidence)


# ---------------------------------------------------------------------------
# exhaustive subset maxima
# ---------------------------------------------------------------------------

MAX_SUBSET_HORIZON = 16


class HorizonError(ValueError):
    pass


def check_horizon(horizon: int) -> None:
    if horizon < 0:
        raise HorizonError("subset horizon must be >= 0")
    if horizon > MAX_SUBSET_HORIZON:
        raise HorizonError(
            f"subset horizon too large: {horizon} > {MAX_SUBSET_HORIZON}")


def max_subset_abs_sum(vectors: Iterable[Sequence[Fraction]], width: int,
                       p: Fraction = ONE) -> tuple:
    """max over masks K of sum_v |sum_{i in K} v[i]|^p, by full enumeration.

    Each vector has ``width`` entries indexed by subset element.  Returns
    ``(value, mask)``; for non-integer p the value is the lower end of the
    enclosure, so it stays a valid lower bound.
    """
    if width > MAX_SUBSET_HORIZON + 1:
        raise HorizonError(f"subset width {width} exceeds {MAX_SUBSET_HORIZON + 1}")
    p = Fraction(p)
    rows = [[Fraction(x) for x in v[:width]] + [ZERO] * (width - len(v))
            for v in vectors]
    rows = [r for r in rows if any(r)]
    if not rows:
        return ZERO, 0
    scale = 1
    for r in rows:
        for x in r:
            scale = math.lcm(scale, x.denominator)
    size = 1 << width
    exact_power = p.denominator == 1
    totals: list = [0] * size if exact_power else [ZERO] * size
    for r in rows:
        sums = [0]
        for x in r:
            step = x.numerator * (scale // x.denominator)
            sums += [s + step for s in sums]
        if exact_power:
            e = p.numerator
            if e == 1:
                totals = [t + abs(s) for t, s in zip(totals, sums)]
            else:
                totals = [t + abs(s) ** e for t, s in zip(totals, sums)]
        else:
            totals = [t + abs_power(Fraction(s, scale), p).lo for t, s in zip(totals, sums)]
    best = max(range(size), key=totals.__getitem__)
    if exact_power:
        return Fraction(totals[best], scale ** p.numerator), best
    return totals[best], best


def mask_members(mask: int, offset: int = 0) -> list:
    return [offset + i for i in range(mask.bit_length()) if mask >> i & 1]
