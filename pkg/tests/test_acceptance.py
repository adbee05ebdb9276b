"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
printed even when pytest captures output.
"""

import random
from fractions import Fraction

import pytest

from fibspace.classes import CLASS_CONDITIONS, ClassId, check_class
from fibspace.compactness import (
    compactness_verdict,
    hmnc_estimate,
    operator_norm_linf,
    tail_norm,
)
from fibspace.duals import _AbarSums, abar_k_n, check_b4, check_beta_conditions, t_matrix_entry
from fibspace.matrices import a00_only, identity, row_differenced, row_e0, sparse, verify_inverse, zero
from fibspace.numerics import (
    LambdaSequence,
    Status,
    cassini_residual,
    fib_sum_residual,
    golden_ratio_gap,
)
from fibspace.spaces import (
    FbarStream,
    b_sequence,
    builtin_sequence,
    expand_in_basis,
    fhat_transform,
    inverse_sequence,
    space_norm,
    table_sequence,
)

LIN = LambdaSequence.linear()


@pytest.fixture
def criterion(capsys):
    """Collects named sub-checks, prints the criterion line and asserts."""

    class Criterion:
        def __init__(self):
            self.failures = []

        def check(self, ok, what):
            if not ok:
                self.failures.append(what)

        def finish(self, number, title):
            status = "PASS" if not self.failures else "FAIL"
            detail = "" if not self.failures else " -- failed: " + "; ".join(self.failures)
            with capsys.disabled():
                print(f"\n{status} criterion {number}: {title}{detail}")
            assert not self.failures, self.failures

    return Criterion()


def _random_rational(rng, lo=-9, hi=9, den=9):
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def test_criterion_01_fibonacci_identities(criterion):
    bad = [n for n in range(1, 201) if cassini_residual(n) != 0]
    criterion.check(not bad, f"Cassini residual nonzero at {bad[:3]}")
    bad = [n for n in range(0, 201) if fib_sum_residual(n) != 0]
    criterion.check(not bad, f"sum residual nonzero at {bad[:3]}")
    gaps = [golden_ratio_gap(n) for n in range(2, 61)]
    criterion.check(all(b.hi < a.lo for a, b in zip(gaps, gaps[1:])),
                    "gap enclosures not strictly decreasing on 2..60")
    criterion.check(gaps[-1].hi < Fraction(1, 10 ** 10), f"final gap {float(gaps[-1].hi)}")
    criterion.finish(1, "Fibonacci identities and golden-ratio gaps")


def test_criterion_02_inverse_identity(criterion):
    for lam in (LIN, LambdaSequence.affine(2, 1), LambdaSequence.geometric(2)):
        v = verify_inverse(lam, 48)
        criterion.check(v.status is Status.CERTIFIED_TRUE, f"{lam.to_spec()}: {v.note}")
    criterion.finish(2, "inverse identity on 48x48 truncations, three lambda families")


def test_criterion_03_witnesses(criterion):
    x = builtin_sequence("fib_square", LIN)
    criterion.check(all(fhat_transform(x, n) == (1 if n == 0 else 0) for n in range(65)),
                    "Fhat(f_(k+1)^2) != e^(0)")
    fb = FbarStream(x, LIN)
    criterion.check(all(fb(n) == LIN(0) / LIN(n) for n in range(65)),
                    "Fbar_n(f_(k+1)^2) != lambda_0/lambda_n")
    fb = FbarStream(builtin_sequence("b_seq", LIN), LIN)
    criterion.check(all(fb(n) == 1 for n in range(65)), "Fbar(b) != e")
    for k in range(13):
        fb = FbarStream(builtin_sequence(f"basis({k})", LIN), LIN)
        criterion.check(all(fb(n) == (1 if n == k else 0) for n in range(49)),
                        f"Fbar(b^({k})) != e^({k})")
    criterion.finish(3, "transform witnesses reproduced exactly")


def test_criterion_04_isomorphism_roundtrip(criterion):
    rng = random.Random(4)
    for trial in range(100):
        support = rng.randint(1, 24)
        values = [_random_rational(rng) for _ in range(support)]
        y = table_sequence(values)
        x = inverse_sequence(y, LIN)
        fb = FbarStream(x, LIN)
        top = support + 8
        criterion.check(all(fb(n) == y(n) for n in range(top)), f"trial {trial}: Fbar(x) != y")
        norm = space_norm(x, LIN, top).value
        criterion.check(norm == max(abs(v) for v in values), f"trial {trial}: norm {norm}")
    criterion.finish(4, "isomorphism roundtrip and norm for 100 random finite y")


def test_criterion_05_expansion_residual(criterion):
    x = builtin_sequence("fib_square", LIN)
    for m in range(31):
        exp = expand_in_basis(x, LIN, m, "c0_lambda_fhat", depth=80)
        criterion.check(exp.residual == Fraction(1, m + 2),
                        f"m = {m}: residual {exp.residual}")
    criterion.finish(5, "expansion residual equals 1/(m+2) for m <= 30")


def test_criterion_06_non_absolute(criterion):
    signed = space_norm(builtin_sequence("sign_witness", LIN), LIN, 50).value
    absolute = space_norm(builtin_sequence("sign_witness_abs", LIN), LIN, 50).value
    criterion.check(signed == Fraction(3, 2), f"||(1,-4,0,...)|| = {signed}")
    criterion.check(absolute == Fraction(5, 3), f"||(1,4,0,...)|| = {absolute}")
    criterion.check(signed != absolute, "norms coincide")
    criterion.finish(6, "norm is of non-absolute type")


def test_criterion_07_dual_identities(criterion):
    rng = random.Random(7)
    for trial in range(50):
        a = table_sequence([_random_rational(rng, -5, 5, 5) for _ in range(rng.randint(1, 20))])
        y = table_sequence([_random_rational(rng, -5, 5, 5) for _ in range(rng.randint(1, 20))])
        x = inverse_sequence(y, LIN)
        lhs, series = Fraction(0), Fraction(0)
        rows = _AbarSums(a, LIN)
        for n in range(61):
            lhs += a(n) * x(n)
            series += b_sequence(n) * a(n)
            diag = t_matrix_entry(a, LIN, n, n)
            row = rows.row(n)
            if n and row[0] != abar_k_n(a, LIN, 0, n):
                criterion.check(False, f"trial {trial}: prefix and direct abar differ")
                break
            rhs = sum((v * y(k) for k, v in enumerate(row)), Fraction(0)) + diag * y(n)
            if lhs != rhs:
                criterion.check(False, f"trial {trial}: Abel identity fails at n = {n}")
                break
            if series != sum(row, Fraction(0)) + diag:
                criterion.check(False, f"trial {trial}: row-sum identity fails at n = {n}")
                break
    rep = check_beta_conditions(table_sequence(["1"]), LIN)
    bounds = tuple(rep.conditions[b].value for b in ("b2", "b3", "b4"))
    criterion.check(bounds == (1, 1, 1), f"e^(0) bounds {bounds}")
    criterion.check(rep.conditions["b5"].value == 1, f"e^(0) b5 value {rep.conditions['b5'].value}")
    criterion.check(all(rep.conditions[b].holds for b in ("b2", "b3", "b4", "b5")),
                    "e^(0) fails a beta condition")
    b4 = check_b4(builtin_sequence("unit", LIN), LIN, 200, Fraction(10 ** 6))
    criterion.check(b4.holds is False,
                    f"a = e passes b4 at threshold 10^6 within depth 200 "
                    f"(running sup {float(b4.value):.1f}, status {b4.status.value})")
    criterion.finish(7, "dual identities, e^(0) in the beta-dual, a = e fails b4")


def test_criterion_08_class_checks(criterion):
    for src, tgt in CLASS_CONDITIONS:
        p = "2" if "lp" in (src, tgt) else None
        cid = ClassId.of(src, tgt, p)
        rep = check_class(zero(), LIN, cid)
        criterion.check(rep.overall.status is Status.CERTIFIED_TRUE, f"zero in {cid}")
    rep = check_class(zero(), LIN, ClassId.parse("l1->c0_lambda_fhat"))
    criterion.check(rep.overall.status is Status.CERTIFIED_TRUE, "zero in l1->c0_lambda_fhat")

    rep = check_class(identity(), LIN, "c_lambda_fhat->l_inf", depth=60)
    c30 = rep.verdict("c30")
    criterion.check(c30.holds is False, f"identity c30 at depth 60: {c30.status.value}")

    rep = check_class(row_e0(), LIN, "c_lambda_fhat->c")
    criterion.check(rep.overall.holds is True, f"row_e0 overall {rep.overall.status.value}")
    alpha0 = dict(rep.verdict("c50").evidence).get(0)
    criterion.check(alpha0 == 1, f"alpha_0 = {alpha0}")
    criterion.check(rep.verdict("c51").value == 1, f"alpha = {rep.verdict('c51').value}")
    criterion.check(rep.verdict("c49").value == 0, f"a = {rep.verdict('c49').value}")
    criterion.finish(8, "class checks for zero, identity and row_e0")


def test_criterion_09_compactness(criterion):
    A = a00_only()
    norm = operator_norm_linf(A, LIN)
    criterion.check(norm.value == 1, f"a00_only norm lower bound {norm.value}")
    tails = [tail_norm(A, LIN, m) for m in range(17)]
    criterion.check(all(t == 0 for t in tails), f"a00_only tails {tails[:4]}")
    verdict, est = compactness_verdict(A, LIN, "c0")
    criterion.check(est.kind == "equality" and est.lower == est.upper == 0,
                    f"a00_only estimate {est.kind} [{est.lower}, {est.upper}]")
    criterion.check(verdict.status is Status.CERTIFIED_TRUE,
                    f"a00_only compactness {verdict.status.value}")

    B = row_e0()
    est = hmnc_estimate(B, LIN, "c")
    criterion.check(all(v == 1 for _, v in est.samples), "row_e0 tail norms not all 1")
    criterion.check(est.kind == "interval" and (est.lower, est.upper) == (Fraction(1, 2), 1),
                    f"row_e0 estimate {est.kind} [{est.lower}, {est.upper}]")
    verdict, _ = compactness_verdict(B, LIN, "c")
    criterion.check(verdict.holds is False, f"row_e0 into c: {verdict.status.value}")
    verdict, _ = compactness_verdict(B, LIN, "l_inf")
    criterion.check(verdict.status is Status.INDETERMINATE,
                    f"row_e0 into l_inf: {verdict.status.value}")
    criterion.finish(9, "compactness of a00_only and row_e0")


def test_criterion_10_bv_path_agreement(criterion):
    rng = random.Random(10)
    for trial in range(20):
        entries = [(rng.randint(0, 14), rng.randint(0, 8), _random_rational(rng, -4, 4, 4))
                   for _ in range(rng.randint(1, 10))]
        A = sparse(entries)
        D = row_differenced(A)
        for m in range(9):
            bv = tail_norm(A, LIN, m, 40, "bv", horizon=10)
            l1 = tail_norm(D, LIN, m, 40, "l1", horizon=10)
            criterion.check(bv == l1, f"trial {trial}, m = {m}: {bv} != {l1}")
    criterion.finish(10, "bv tail norm equals l1 tail norm of the differenced matrix")
