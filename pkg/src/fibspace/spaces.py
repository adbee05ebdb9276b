"""Sequence transforms, the space norm, membership, bases and witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .matrices import fbar_entry, fhat_entry
from .numerics import (
    ONE,
    ZERO,
    LambdaSequence,
    Status,
    Verdict,
    abs_power,
    certified,
    estimate_limit,
    estimate_sup,
    fib,
    parse_rational,
    render_rational,
)

LAMBDA_SPACES = ("c0_lambda_fhat", "c_lambda_fhat")
CLASSICAL_SPACES = ("c0", "c", "l_inf", "l1", "lp")


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SequenceOracle:
    """Lazy sequence x = (x_k); negative indices read as 0.

    ``support`` is set when x_k = 0 for every k >= support.  ``name`` is the
    builtin witness id, None for user data.
    """

    term_fn: Callable[[int], Fraction]
    provenance: str
    name: Optional[str] = None
    support: Optional[int] = None
    spec: Optional[dict] = None
    _memo: dict = field(default_factory=dict, repr=False)

    def __call__(self, k: int) -> Fraction:
        if k < 0:
            return ZERO
        try:
            return self._memo[k]
        except KeyError:
            value = Fraction(self.term_fn(k))
            self._memo[k] = value
            return value

    def prefix(self, n: int) -> list[Fraction]:
        return [self(k) for k in range(n + 1)]

    @property
    def builtin(self) -> bool:
        return self.name is not None


@dataclass(frozen=True)
class Space:
    name: str
    p: Fraction = ONE

    def __post_init__(self) -> None:
        if self.name not in LAMBDA_SPACES + CLASSICAL_SPACES:
            raise ValueError(f"unknown space id {self.name!r}")
        if self.name == "lp" and self.p < 1:
            raise ValueError("lp needs p >= 1")

    @classmethod
    def parse(cls, text: str, p=None) -> "Space":
        text = text.strip()
        if text.startswith("lp(") and text.endswith(")"):
            return cls("lp", parse_rational(text[3:-1]))
        if text == "lp":
            return cls("lp", parse_rational(p if p is not None else 1))
        if text in ("linf", "l_infty"):
            text = "l_inf"
        return cls(text)

    def __str__(self) -> str:
        return f"lp({render_rational(self.p)})" if self.name == "lp" else self.name


def table_sequence(values, tail: str = "zero") -> SequenceOracle:
    if tail != "zero":
        raise ValueError(f"unsupported tail {tail!r}; only 'zero' is defined")
    table = [parse_rational(v) for v in values]
    return SequenceOracle(lambda k: table[k] if k < len(table) else ZERO,
                          f"table of {len(table)} values, zero tail",
                          spec={"kind": "table", "values": [render_rational(v) for v in table],
                                "tail": "zero"})


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def fhat_transform(x: Callable[[int], Fraction], n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return x(0)
    return Fraction(fib(n), fib(n + 1)) * x(n) - Fraction(fib(n + 1), fib(n)) * x(n - 1)


class FbarStream:
    """n -> F̄_n(x), extended incrementally from weighted prefix sums."""

    def __init__(self, x: Callable[[int], Fraction], lam: LambdaSequence) -> None:
        self.x, self.lam = x, lam
        self._acc = ZERO
        self._values: list[Fraction] = []

    def __call__(self, n: int) -> Fraction:
        values = self._values
        while len(values) <= n:
            k = len(values)
            self._acc += self.lam.step(k) * fhat_transform(self.x, k)
            values.append(self._acc / self.lam(k))
        return values[n]

    def prefix(self, n: int) -> list[Fraction]:
        self(n)
        return self._values[:n + 1]


def fbar_transform(x: Callable[[int], Fraction], lam: LambdaSequence, n: int) -> Fraction:
    return FbarStream(x, lam)(n)


def fbar_transform_rowform(x: Callable[[int], Fraction], lam: LambdaSequence,
                           n: int) -> Fraction:
    """Same value through the explicit triangle row (independent path)."""
    return sum((fbar_entry(lam, n, j) * x(j) for j in range(n + 1)), ZERO)


def inverse_transform(y: Callable[[int], Fraction], lam: LambdaSequence, k: int) -> Fraction:
    """x_k of the sequence whose weighted transform is y (literal double sum)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    square = fib(k + 1) ** 2
    total = ZERO
    for j in range(k + 1):
        for i in (j - 1, j):
            if i < 0:
                continue
            sign = 1 if (j - i) % 2 == 0 else -1
            total += sign * lam(i) * y(i) / lam.step(j) * Fraction(square, fib(j) * fib(j + 1))
    return total


class InverseStream:
    """k -> x_k with x_k = f_{k+1}^2 * (running sum), linear work per term."""

    def __init__(self, y: Callable[[int], Fraction], lam: LambdaSequence) -> None:
        self.y, self.lam = y, lam
        self._acc = ZERO
        self._values: list[Fraction] = []

    def __call__(self, k: int) -> Fraction:
        values, lam, y = self._values, self.lam, self.y
        while len(values) <= k:
            j = len(values)
            diff = lam(j) * y(j) - (lam(j - 1) * y(j - 1) if j > 0 else ZERO)
            self._acc += diff / (lam.step(j) * fib(j) * fib(j + 1))
            values.append(fib(j + 1) ** 2 * self._acc)
        return values[k]


def inverse_sequence(y: Callable[[int], Fraction], lam: LambdaSequence) -> SequenceOracle:
    stream = InverseStream(y, lam)
    return SequenceOracle(stream, "inverse transform of a sequence")


def space_norm(x: SequenceOracle, lam: LambdaSequence, depth: int = 200,
               threshold: Fraction = Fraction(10 ** 9)) -> Verdict:
    """max_{n<=depth} |F̄_n(x)| as an exact lower bound for the norm."""
    stream = FbarStream(x, lam)
    bound_at = None
    cert = _witness_fbar_certificate(x, lam, depth)
    if cert is not None:
        bound_at = cert[1]
    return estimate_sup(lambda n: abs(stream(n)), depth, threshold, settled_after=bound_at)


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

def basis_vector(k: int, n: int, lam: LambdaSequence) -> Fraction:
    """n-th term of the k-th basis sequence (the preimage of e^(k))."""
    if k < 0 or n < 0:
        raise ValueError("indices must be >= 0")
    if n < k:
        return ZERO
    square = Fraction(fib(n + 1) ** 2)
    head = lam(k) / lam.step(k) * square / (fib(k) * fib(k + 1))
    if n == k:
        return head
    return head - lam(k) / lam.step(k + 1) * square / (fib(k + 1) * fib(k + 2))


class _BSequence:
    def __init__(self) -> None:
        self._harmonic = [ZERO]  # sum_{j=1}^{n} 1/(f_j f_{j+1})

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be >= 0")
        if n == 0:
            return ONE
        h = self._harmonic
        while len(h) <= n:
            j = len(h)
            h.append(h[-1] + Fraction(1, fib(j) * fib(j + 1)))
        return fib(n + 1) ** 2 * (h[n] + 1)


b_sequence = _BSequence()


# ---------------------------------------------------------------------------
# builtin witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    oracle: SequenceOracle
    expected: dict
    note: str = ""


WITNESS_IDS = ("fib_square", "b_seq", "unit", "basis(k)", "sign_witness",
               "sign_witness_abs", "zero")


def builtin_sequence(name: str, lam: LambdaSequence) -> SequenceOracle:
    spec = {"kind": "builtin", "name": name}
    if name == "fib_square":
        return SequenceOracle(lambda k: Fraction(fib(k + 1) ** 2), "x_k = f_{k+1}^2",
                              name=name, spec=spec)
    if name == "b_seq":
        return SequenceOracle(b_sequence, "b: preimage of the unit sequence", name=name,
                              spec=spec)
    if name == "unit":
        return SequenceOracle(lambda k: ONE, "e = (1, 1, 1, ...)", name=name, spec=spec)
    if name == "zero":
        return SequenceOracle(lambda k: ZERO, "zero sequence", name=name, support=0, spec=spec)
    if name == "sign_witness":
        vals = (ONE, Fraction(-4))
        return SequenceOracle(lambda k: vals[k] if k < 2 else ZERO, "(1, -4, 0, 0, ...)",
                              name=name, support=2, spec=spec)
    if name == "sign_witness_abs":
        vals = (ONE, Fraction(4))
        return SequenceOracle(lambda k: vals[k] if k < 2 else ZERO, "(1, 4, 0, 0, ...)",
                              name=name, support=2, spec=spec)
    if name.startswith("basis(") and name.endswith(")"):
        k0 = int(name[6:-1])
        if k0 < 0:
            raise ValueError("basis index must be >= 0")
        return SequenceOracle(lambda n: basis_vector(k0, n, lam), f"basis sequence b^({k0})",
                              name=name, spec=spec)
    raise ValueError(f"unknown witness id {name!r}; known: {list(WITNESS_IDS)}")


def inclusion_witness(name: str, lam: Optional[LambdaSequence] = None) -> Witness:
    """A builtin witness with the membership table asserted for it."""
    lam = lam or LambdaSequence.linear()
    oracle = builtin_sequence(name, lam)
    if name == "fib_square":
        return Witness(oracle, {"c0_lambda_fhat": True, "c_lambda_fhat": True,
                                "l_inf": False, "c": False},
                       note="taken as (f_{k+1}^2), the sequence whose Fhat-transform "
                            "is (1, 0, 0, ...)")
    if name == "b_seq":
        return Witness(oracle, {"c_lambda_fhat": True, "c0_lambda_fhat": False})
    if name == "unit":
        expected = {"c": True, "c0": False, "l_inf": True}
        if lam.liminf_ratio_one:
            expected["c_lambda_fhat"] = True
        return Witness(oracle, expected,
                       note="c inclusion checked only when liminf lambda_{n+1}/lambda_n = 1")
    if name in ("sign_witness", "sign_witness_abs"):
        return Witness(oracle, {"c0_lambda_fhat": True, "c_lambda_fhat": True},
                       note="norms differ between the signed and absolute versions")
    if name == "zero":
        return Witness(oracle, {s: True for s in LAMBDA_SPACES + ("c0", "c", "l_inf", "l1")})
    # basis(k)
    return Witness(oracle, {"c0_lambda_fhat": True, "c_lambda_fhat": True})


def _witness_fbar_certificate(x: SequenceOracle, lam: LambdaSequence,
                              depth: int) -> Optional[tuple]:
    """(limit of F̄(x), index attaining sup |F̄(x)|) for builtins with a closed form.

    The closed form is checked exactly on 0..depth; None if x has none or the
    check fails.
    """
    if not x.builtin:
        return None
    stream = FbarStream(x, lam)
    name = x.name
    if name == "fib_square":
        lam0 = lam(0)
        if all(stream(n) == lam0 / lam(n) for n in range(depth + 1)):
            return ZERO, 0
        return None
    if name == "b_seq":
        if all(stream(n) == 1 for n in range(depth + 1)):
            return ONE, 0
        return None
    if name.startswith("basis("):
        k0 = int(name[6:-1])
        if all(stream(n) == (ONE if n == k0 else ZERO) for n in range(depth + 1)):
            return ZERO, k0
        return None
    if x.support is not None and depth >= x.support:
        # F̂ vanishes past the support, so F̄_n = const / lambda_n from there on
        if all(fhat_transform(x, n) == 0 for n in range(x.support + 1, depth + 1)):
            return ZERO, x.support
    return None


def _classical_certificate(x: SequenceOracle, space: Space) -> Optional[Verdict]:
    if not x.builtin:
        return None
    if x.support is not None:
        return certified(True, ZERO if space.name in ("c0", "c") else None,
                         note=f"finitely supported builtin (support < {x.support})")
    if x.name == "unit":
        if space.name == "c":
            return certified(True, ONE, note="constant sequence")
        if space.name == "l_inf":
            return certified(True, ONE, note="constant sequence")
        if space.name == "c0":
            return certified(False, ONE, note="constant sequence with limit 1")
        return certified(False, note="partial sums of |x_k|^p equal n + 1")
    return None


def _zero_limit(v: Verdict, tol: Fraction) -> Verdict:
    """Turn a convergence verdict into a 'converges to 0' verdict."""
    if v.holds is not True:
        return v
    if v.status is Status.CERTIFIED_TRUE:
        return v if v.value == 0 else v.with_status(Status.CERTIFIED_FALSE, "limit is not 0")
    if abs(v.value) <= tol:
        return v
    return v.with_status(Status.EMPIRICAL_FALSE, "limit candidate is not 0")


def _series_verdict(terms: Callable[[int], Fraction], p: Fraction, depth: int, window: int,
                    tol: Fraction, threshold: Fraction) -> Verdict:
    partial: list = []
    acc = ZERO

    def stream(n: int) -> Fraction:
        nonlocal acc
        while len(partial) <= n:
            acc += abs_power(terms(len(partial)), p).lo
            partial.append(acc)
        return partial[n]

    return estimate_limit(stream, depth, window, tol, threshold)


def membership(x: SequenceOracle, space: Space, lam: LambdaSequence, depth: int = 200,
               window: int = 16, tol: Fraction = Fraction(1, 10 ** 6),
               threshold: Fraction = Fraction(10 ** 9)) -> Verdict:
    """Finite-depth membership verdict; builtins with a closed form are certified."""
    if isinstance(space, str):
        space = Space.parse(space)
    tol, threshold = Fraction(tol), Fraction(threshold)
    name = space.name
    if name in LAMBDA_SPACES:
        cert = _witness_fbar_certificate(x, lam, depth)
        if cert is not None:
            limit = cert[0]
            holds = name == "c_lambda_fhat" or limit == 0
            return certified(holds, limit, depth=depth,
                             note="closed form of the weighted transform verified exactly")
        if name == "c_lambda_fhat" and x.name == "unit" and lam.liminf_ratio_one:
            return certified(True, depth=depth,
                             note="c is contained in c^lambda(F) when liminf "
                                  "lambda_{n+1}/lambda_n = 1")
        stream = FbarStream(x, lam)
        v = estimate_limit(stream, depth, window, tol, threshold)
        return _zero_limit(v, tol) if name == "c0_lambda_fhat" else v
    cert = _classical_certificate(x, space)
    if cert is not None:
        return cert
    if name == "c":
        return estimate_limit(x, depth, window, tol, threshold)
    if name == "c0":
        return _zero_limit(estimate_limit(x, depth, window, tol, threshold), tol)
    if name == "l_inf":
        return estimate_sup(lambda k: abs(x(k)), depth, threshold)
    p = ONE if name == "l1" else space.p
    return _series_verdict(x, p, depth, window, tol, threshold)


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisExpansion:
    space: str
    coefficients: tuple
    limit: Optional[Fraction]
    residual: Optional[Fraction]
    depth: int
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "coefficients": [render_rational(c) for c in self.coefficients],
            "limit": None if self.limit is None else render_rational(self.limit),
            "residual": None if self.residual is None else render_rational(self.residual),
            "depth": self.depth,
            "verdict": self.verdict.to_json(),
        }


def expand_in_basis(x: SequenceOracle, lam: LambdaSequence, m: int,
                    space: str = "c0_lambda_fhat", depth: int = 200, window: int = 16,
                    tol: Fraction = Fraction(1, 10 ** 6),
                    threshold: Fraction = Fraction(10 ** 9)) -> BasisExpansion:
    """Coefficients F̄_k(x), k <= m, and the norm of x minus the partial sum.

    For c^lambda(F) the partial sum is l*b + sum (alpha_k - l) b^(k) with l the
    limit of F̄(x); the residual is the norm of the difference at ``depth``.
    """
    space = str(space)
    if space not in LAMBDA_SPACES:
        raise ValueError("expansions exist only in c0_lambda_fhat and c_lambda_fhat")
    if m < 0:
        raise ValueError("m must be >= 0")
    depth = max(depth, m + 1)
    stream = FbarStream(x, lam)
    alphas = tuple(stream(k) for k in range(m + 1))
    limit = None
    if space == "c_lambda_fhat":
        lv = membership(x, Space(space), lam, depth, window, tol, threshold)
        if lv.holds is not True or lv.value is None:
            return BasisExpansion(space, alphas, None, None, depth,
                                  Verdict(Status.INDETERMINATE, depth=depth,
                                          note="limit of the transform is not determined"))
        limit = lv.value
        coefficients = tuple(a - limit for a in alphas)
    else:
        coefficients = alphas

    def partial(n: int) -> Fraction:
        total = limit * b_sequence(n) if limit else ZERO
        for k, c in enumerate(coefficients[:n + 1]):
            if c:
                total += c * basis_vector(k, n, lam)
        return total

    residual_seq = SequenceOracle(lambda n: x(n) - partial(n), "expansion residual")
    norm = space_norm(residual_seq, lam, depth)
    status = Status.EMPIRICAL_TRUE
    return BasisExpansion(space, coefficients, limit, norm.value, depth,
                          Verdict(status, depth=depth, value=norm.value,
                                  note="residual is an exact lower bound at this depth"))


# ---------------------------------------------------------------------------
# user sequence rules
# ---------------------------------------------------------------------------

def _rule_constant(params):
    v = parse_rational(params.get("value", "1"))
    return (lambda k: v), f"constant {render_rational(v)}"


def _rule_unit_vector(params):
    at = int(params.get("k", 0))
    return (lambda k: ONE if k == at else ZERO), f"e^({at})"


def _rule_geometric(params):
    r = parse_rational(params.get("ratio", "1/2"))
    scale = parse_rational(params.get("scale", "1"))
    return (lambda k: scale * r ** k), f"{render_rational(scale)} * {render_rational(r)}^k"


def _rule_power(params):
    e = int(params.get("exponent", 1))
    return (lambda k: Fraction(k + 1) ** e), f"(k+1)^{e}"


def _rule_alternating(params):
    return (lambda k: ONE if k % 2 == 0 else -ONE), "(-1)^k"


SEQUENCE_RULES = {
    "constant": _rule_constant,
    "unit_vector": _rule_unit_vector,
    "geometric": _rule_geometric,
    "power": _rule_power,
    "alternating": _rule_alternating,
}


def sequence_from_spec(spec: dict, lam: LambdaSequence) -> SequenceOracle:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("sequence spec must be an object with a 'kind' key")
    kind = spec["kind"]
    if kind == "builtin":
        return builtin_sequence(spec.get("name", ""), lam)
    if kind == "table":
        return table_sequence(spec.get("values", []), spec.get("tail", "zero"))
    if kind == "rule":
        rule = spec.get("name")
        if rule not in SEQUENCE_RULES:
            raise ValueError(f"unknown sequence rule {rule!r}; known: {sorted(SEQUENCE_RULES)}")
        fn, text = SEQUENCE_RULES[rule](spec.get("params", {}))
        return SequenceOracle(fn, text, spec=spec)
    raise ValueError(f"unknown sequence kind {kind!r}")
