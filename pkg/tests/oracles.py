"""Reference computations built straight from the definitions.

Nothing here calls the closed forms under test: inverses come from forward
substitution, transformed entries from explicit products with that inverse,
and subset maxima from enumerating every subset.
"""

from fractions import Fraction
from itertools import combinations


def fibs(n):
    out = [1, 1]
    while len(out) <= n:
        out.append(out[-1] + out[-2])
    return out[: n + 1] if n >= 1 else out[:1]


def lam_table(lam, n):
    return [lam(k) for k in range(n + 1)]


def fhat_dense(N):
    f = fibs(N + 1)
    M = [[Fraction(0)] * N for _ in range(N)]
    for n in range(N):
        M[n][n] = Fraction(f[n], f[n + 1])
        if n > 0:
            M[n][n - 1] = -Fraction(f[n + 1], f[n])
    return M


def fbar_dense(lam, N):
    """(1/lambda_n) sum_{k<=n} (lambda_k - lambda_{k-1}) * (row k of Fhat)."""
    L = lam_table(lam, N)
    H = fhat_dense(N)
    M = [[Fraction(0)] * N for _ in range(N)]
    for n in range(N):
        for k in range(n + 1):
            d = L[k] - (L[k - 1] if k else 0)
            for j in range(N):
                M[n][j] += d * H[k][j] / L[n]
    return M


def lower_inverse(M):
    """Inverse of a lower-triangular matrix by forward substitution."""
    N = len(M)
    X = [[Fraction(0)] * N for _ in range(N)]
    for col in range(N):
        for n in range(N):
            rhs = Fraction(1 if n == col else 0)
            rhs -= sum((M[n][j] * X[j][col] for j in range(n)), Fraction(0))
            X[n][col] = rhs / M[n][n]
    return X


def matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)]
            for i in range(n)]


def abar_dense(A, lam, rows, cols):
    """abar_nk = sum_{j>=k} a_nj * (Fbar^{-1})_{jk} for matrices with short rows."""
    S = lower_inverse(fbar_dense(lam, cols))
    return [[sum((A(n, j) * S[j][k] for j in range(k, cols)), Fraction(0))
             for k in range(cols)] for n in range(rows)]


def subset_max(vectors, width, p=1):
    """max over subsets K of {0..width-1} of sum_v |sum_{i in K} v[i]|^p."""
    best = Fraction(0)
    for r in range(width + 1):
        for K in combinations(range(width), r):
            total = sum((abs(sum((v[i] for i in K), Fraction(0))) ** p for v in vectors),
                        Fraction(0))
            best = max(best, total)
    return best


def inverse_by_substitution(y, lam, n):
    """Solve Fbar x = y for x_0..x_n using the dense transform."""
    M = fbar_dense(lam, n + 1)
    x = []
    for i in range(n + 1):
        rhs = y(i) - sum((M[i][j] * x[j] for j in range(i)), Fraction(0))
        x.append(rhs / M[i][i])
    return x
