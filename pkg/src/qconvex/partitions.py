"""Partition numbers and the limit F(q) = prod_{k>=2} 1/(1 - q^k) of the q-Catalan polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq

from .errors import DomainError
from .exactpoly import poly_derivative, poly_eval

__all__ = [
    "SeriesTrunc",
    "FDerivatives",
    "partition_numbers",
    "F_series",
    "F_derivatives_at",
    "choose_kmax",
    "tail_bound",
    "convergence_probe",
    "log_growth_ratios",
]

TAIL_BITS = 60


@dataclass(frozen=True)
class SeriesTrunc:
    order: int
    coeffs: tuple


def partition_numbers(max_n):
    """P(0..max_n) by Euler's pentagonal number recurrence."""
    if max_n < 0:
        raise DomainError("max_n must be nonnegative")
    p = [1] + [0] * max_n
    for m in range(1, max_n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def F_series(order):
    """Coefficients of prod_{k=2}^{order} 1/(1 - q^k) up to q^order."""
    if order < 0:
        raise DomainError("order must be nonnegative")
    c = [1] + [0] * order
    # multiplying by 1/(1 - q^k) is a running sum with stride k
    for k in range(2, order + 1):
        for i in range(k, order + 1):
            c[i] += c[i - k]
    return SeriesTrunc(order, tuple(c))


def tail_bound(q, kmax):
    """Upper bound for sum_{k>kmax} k|q|^{k-1}/(1 - |q|^k), via k|x|^{k-1}/(1 - |x|)."""
    x = abs(Fraction(q))
    if x == 0:
        return Fraction(0)
    K = kmax
    # sum_{k>K} k x^{k-1} = ((K+1) x^K (1-x) + x^{K+1}) / (1-x)^2
    s = ((K + 1) * x ** K * (1 - x) + x ** (K + 1)) / (1 - x) ** 2
    return s / (1 - x)


def choose_kmax(q, partial_scale=1):
    """Smallest kmax >= 2 whose tail bound is below 2^-60 * max(1, partial_scale)."""
    x = abs(float(q))
    if x == 0:
        return 2
    target = 2.0 ** -TAIL_BITS * max(1.0, abs(float(partial_scale)))
    # float search first, then confirm exactly
    k = 2
    while math.log(k + 1) + k * math.log(x) - 3 * math.log1p(-x) > math.log(target) - 1:
        k += 1
    while float(tail_bound(q, k)) > target:
        k += 1
    # the float estimate is loose; walk back to the smallest admissible k
    while k > 2 and float(tail_bound(q, k - 1)) <= target:
        k -= 1
    return k


def _auto_kmax(q):
    # the log-derivative sum is of size about 1/(1-|q|)^2
    return choose_kmax(q, partial_scale=1 / (1 - abs(float(q))) ** 2)


@dataclass(frozen=True)
class FDerivatives:
    q: Fraction
    kmax: int
    F: Fraction
    Fprime: Fraction
    Fsecond: Fraction
    logderiv: Fraction  # sum_{k=2}^{kmax} k q^{k-1}/(1 - q^k)
    tail_bound: Fraction


@lru_cache(maxsize=256)
def _f_sums(num, den, kmax):
    # F, S1 and F'' as gmpy2 rationals; GMP gcds keep |q| = 0.9 near a second
    x = mpq(num, den)
    F = mpq(1)
    S1 = mpq(0)
    S2 = mpq(0)
    S3 = mpq(0)
    xk1 = mpq(1)  # q^{k-1}
    for k in range(1, kmax + 1):
        xk = xk1 * x
        den = 1 - xk
        if k >= 2:
            F /= den
            t = k * xk1 / den
            S1 += t
            S2 += t * t
        S3 += 2 * xk1 * xk1 / (den * den * den)
        xk1 = xk
    return F, S1, F * (S1 * S1 + S2 + S3)


def F_derivatives_at(q, kmax=None):
    """F, F', F'' at a rational |q| < 1 from the truncated log-derivative sums.

    F'' = F (S1^2 + S2 + S3) with S1 = sum k q^{k-1}/(1-q^k), S2 = sum of its
    squared terms and S3 = sum_{k>=1} 2 q^{2k-2}/(1-q^k)^3, all truncated at kmax.
    kmax=None picks it from the tail bound.
    """
    q = Fraction(q)
    if abs(q) >= 1:
        raise DomainError(f"|q| < 1 required, got {q}")
    if kmax is None:
        kmax = _auto_kmax(q)
    if kmax < 2:
        raise DomainError("kmax must be at least 2")
    F, S1, F2 = _f_sums(q.numerator, q.denominator, kmax)

    def fr(v):
        # mpq is already reduced; skip Fraction's gcd (seconds at 300k digits)
        f = object.__new__(Fraction)
        f._numerator, f._denominator = int(v.numerator), int(v.denominator)
        return f

    return FDerivatives(
        q=q,
        kmax=kmax,
        F=fr(F),
        Fprime=fr(F * S1),
        Fsecond=fr(F2),
        logderiv=fr(S1),
        tail_bound=tail_bound(q, kmax),
    )


def convergence_probe(grid, n_list, kmax=None):
    """Rows (n, sup over the grid of |C_n''(q) - F''(q)|), as floats, in n_list order."""
    from .qcore import qcatalan_poly

    grid = [Fraction(g) for g in grid]
    if any(abs(g) >= 1 for g in grid):
        raise DomainError("grid must lie in (-1, 1)")
    if list(n_list) != sorted(set(n_list)):
        raise DomainError("n_list must be strictly increasing")
    F2 = {}
    for g in grid:
        k = kmax if kmax is not None else _auto_kmax(g)
        F2[g] = _f_sums(g.numerator, g.denominator, k)[2]
    rows = []
    for n in n_list:
        c2 = poly_derivative(poly_derivative(qcatalan_poly(n)))
        sup = max(abs(mpq(poly_eval(c2, g)) - F2[g]) for g in grid)
        rows.append((n, float(sup)))
    return rows


def log_growth_ratios(max_n):
    """log P(n) / n for n = 1..max_n."""
    p = partition_numbers(max_n)
    return [math.log(p[n]) / n for n in range(1, max_n + 1)]
