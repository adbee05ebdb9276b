import math
import threading
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibspace.numerics import (
    HorizonError,
    Interval,
    LambdaHorizonError,
    LambdaSequence,
    Status,
    abs_power,
    cassini_residual,
    check_horizon,
    conjunction,
    estimate_limit,
    estimate_sup,
    fib,
    fib_sum_residual,
    golden_ratio_gap,
    mask_members,
    max_subset_abs_sum,
    parse_rational,
    render_decimal,
    render_rational,
    sqrt5_enclosure,
)

from oracles import fibs, subset_max


def test_fib_values():
    assert [fib(n) for n in range(8)] == [1, 1, 2, 3, 5, 8, 13, 21]
    assert fib(50) == 20365011074
    assert fib(200) == fibs(200)[200]


def test_fib_negative_index_rejected():
    with pytest.raises(ValueError):
        fib(-1)


def test_fib_cache_is_thread_safe():
    from fibspace.numerics import FibonacciCache
    cache = FibonacciCache()
    out = []

    def work(n):
        out.append(cache(n))

    threads = [threading.Thread(target=work, args=(300 - i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    ref = fibs(300)
    assert sorted(out) == sorted(ref[300 - i] for i in range(8))
    assert all(cache(n) == ref[n] for n in range(301))


@given(st.integers(min_value=1, max_value=400))
def test_cassini_and_sum_residuals_vanish(n):
    assert cassini_residual(n) == 0
    assert fib_sum_residual(n) == 0


def test_cassini_rejects_zero():
    with pytest.raises(ValueError):
        cassini_residual(0)


def test_sqrt5_enclosure_contains_root():
    iv = sqrt5_enclosure(80)
    assert iv.lo ** 2 <= 5 <= iv.hi ** 2
    assert iv.width < Fraction(1, 2 ** 70)


def test_golden_gap_decreases_strictly_and_is_tight():
    gaps = [golden_ratio_gap(n) for n in range(2, 61)]
    assert all(b.hi < a.lo for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1].hi < Fraction(1, 10 ** 10)
    phi = (1 + math.sqrt(5)) / 2
    for n in (2, 5, 20):
        assert abs(float(golden_ratio_gap(n).midpoint) - abs(fib(n + 1) / fib(n) - phi)) < 1e-12


@given(st.fractions(), st.fractions(min_value=1, max_value=5, max_denominator=4))
def test_abs_power_encloses(value, p):
    iv = abs_power(value, p)
    if p.denominator == 1:
        assert iv.lo == iv.hi == abs(value) ** p.numerator
    else:
        assert iv.lo <= iv.hi
        approx = abs(float(value)) ** float(p)
        assert float(iv.lo) <= approx * (1 + 1e-9) + 1e-300
        assert float(iv.hi) >= approx * (1 - 1e-9)


@given(st.fractions())
def test_rational_round_trip(v):
    assert parse_rational(render_rational(v)) == v


def test_parse_forms():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert parse_rational("0.25") == Fraction(1, 4)
    assert render_rational(Fraction(-6, 4)) == "-3/2"
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("abc")


def test_render_decimal():
    assert render_decimal(Fraction(1, 3)) == "0.333333333333"
    assert render_decimal(Fraction(39, 4)) == "9.75"
    assert render_decimal(Fraction(0)) == "0"


def test_lambda_families():
    assert [LambdaSequence.linear()(k) for k in range(-1, 3)] == [0, 1, 2, 3]
    aff = LambdaSequence.affine(2, 1)
    assert [aff(k) for k in range(3)] == [1, 3, 5]
    geo = LambdaSequence.geometric("3/2")
    assert geo(1) == Fraction(9, 4)
    cus = LambdaSequence.custom(["1", "3", "4"])
    assert cus(2) == 4
    with pytest.raises(LambdaHorizonError):
        cus(3)
    ext = LambdaSequence.custom(["1", "3", "4"], "arithmetic")
    assert [ext(k) for k in range(3, 6)] == [5, 6, 7]


@pytest.mark.parametrize("bad", [
    {"family": "affine", "alpha": "0", "beta": "1"},
    {"family": "geometric", "ratio": "1"},
    {"family": "custom", "values": ["1", "1"]},
    {"family": "custom", "values": ["-1", "2"]},
    {"family": "quadratic"},
])
def test_lambda_rejects_invalid(bad):
    with pytest.raises(ValueError):
        LambdaSequence.from_spec(bad)


@pytest.mark.parametrize("spec", [
    {"family": "linear"},
    {"family": "affine", "alpha": "2", "beta": "1/3"},
    {"family": "geometric", "ratio": "5/2"},
    {"family": "custom", "values": ["1/2", "1", "7"], "extend": "arithmetic"},
])
def test_lambda_spec_round_trip(spec):
    lam = LambdaSequence.from_spec(spec)
    assert lam.to_spec() == spec
    assert LambdaSequence.from_spec(lam.to_spec()) == lam


def test_estimate_limit_examples():
    v = estimate_limit(lambda n: Fraction(1, n + 1), 200, 16, Fraction(1, 10 ** 3))
    assert v.status is Status.EMPIRICAL_TRUE
    v = estimate_limit(lambda n: Fraction(1, n + 1), 200, 16)
    assert v.status is Status.INDETERMINATE
    v = estimate_limit(lambda n: Fraction(fib(n)), 200, 16)
    assert v.status is Status.EMPIRICAL_FALSE
    v = estimate_limit(lambda n: Fraction(7) if n > 3 else Fraction(n), 50, 16, settled_after=4)
    assert v.status is Status.CERTIFIED_TRUE and v.value == 7


def test_estimate_limit_rejects_bad_window():
    with pytest.raises(ValueError):
        estimate_limit(lambda n: Fraction(0), 5, 16)


def test_estimate_sup_examples():
    v = estimate_sup(lambda n: Fraction(n + 1, 1) * Fraction(fib(n + 1), fib(n)), 60, 10 ** 3)
    # the running maximum at depth 60 is 61 f_61/f_60, about 98.7: below the cutoff
    assert v.status is Status.EMPIRICAL_TRUE
    assert v.value == Fraction(61 * fib(61), fib(60))
    v = estimate_sup(lambda n: Fraction(fib(n)), 200, 10 ** 6)
    assert v.status is Status.EMPIRICAL_FALSE and v.value > 10 ** 6
    v = estimate_sup(lambda n: Fraction(1) if n == 0 else Fraction(0), 10, settled_after=0)
    assert v.status is Status.CERTIFIED_TRUE and v.value == 1


def test_conjunction_is_conservative():
    from fibspace.numerics import Verdict
    ct, et = Verdict(Status.CERTIFIED_TRUE), Verdict(Status.EMPIRICAL_TRUE)
    assert conjunction([ct, ct]).status is Status.CERTIFIED_TRUE
    assert conjunction([ct, et]).status is Status.EMPIRICAL_TRUE
    assert conjunction([ct, Verdict(Status.INDETERMINATE)]).status is Status.INDETERMINATE
    assert conjunction([et, Verdict(Status.EMPIRICAL_FALSE)]).status is Status.EMPIRICAL_FALSE
    assert conjunction([Verdict(Status.CERTIFIED_FALSE), et]).status is Status.CERTIFIED_FALSE


def test_interval_checks_order():
    with pytest.raises(ValueError):
        Interval(Fraction(2), Fraction(1))


vectors = st.lists(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6),
                            min_size=4, max_size=4), min_size=1, max_size=5)


@given(vectors, st.sampled_from([1, 2]))
def test_subset_max_matches_brute_force(vs, p):
    value, mask = max_subset_abs_sum(vs, 4, Fraction(p))
    assert value == subset_max(vs, 4, p)
    chosen = mask_members(mask)
    assert sum(abs(sum((v[i] for i in chosen), Fraction(0))) ** p for v in vs) == value


def test_horizon_limit():
    check_horizon(16)
    with pytest.raises(HorizonError):
        check_horizon(17)
    with pytest.raises(HorizonError):
        max_subset_abs_sum([[Fraction(1)] * 18], 18)
