"""q-binomials, the MacMahon q-Catalan polynomial and its special values."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DomainError, MismatchError
from .exactpoly import IntPoly, one_minus_qk, poly_derivative, poly_divexact, poly_eval

__all__ = [
    "QCatalanRecord",
    "SpecialValues",
    "CentralParity",
    "catalan_number",
    "q_binomial",
    "qcatalan",
    "qcatalan_poly",
    "qcatalan_dyck_oracle",
    "special_values",
    "f_recurrence_check",
    "central_parity",
    "binary_digit_sum",
    "two_adic_valuation",
]


@lru_cache(maxsize=None)
def _catalan_table(n):
    c = [1]
    for m in range(n):
        c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
    return tuple(c)


def catalan_number(n):
    """Catalan(n) from the convolution recurrence."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return _catalan_table(n)[n]


def q_binomial(m, k):
    """Gaussian binomial [m choose k]_q as an integer polynomial."""
    if k < 0 or k > m:
        raise DomainError(f"q_binomial needs 0 <= k <= m, got m={m}, k={k}")
    p = IntPoly(1)
    # the i-th partial product is [m-k+i choose i]_q, a polynomial at every step
    for i in range(1, k + 1):
        p = poly_divexact(p * one_minus_qk(m - k + i), one_minus_qk(i))
    return p


@dataclass(frozen=True)
class QCatalanRecord:
    n: int
    poly: IntPoly
    degree: int
    palindromic: bool
    catalan_at_1: int


@lru_cache(maxsize=128)
def qcatalan_poly(n):
    """C_n(q) from the product formula prod_{j=2}^n (1-q^{n+j})/(1-q^j)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n < 2:
        return IntPoly(1)
    p = IntPoly(1)
    for j in range(2, n + 1):
        p = p * one_minus_qk(n + j)
    # dividing the full numerator leaves a polynomial after every step
    for j in range(2, n + 1):
        p = poly_divexact(p, one_minus_qk(j))
    return p


def qcatalan(n):
    """QCatalanRecord for C_n(q); the record invariants are checked here."""
    p = qcatalan_poly(n)
    rec = QCatalanRecord(
        n=n,
        poly=p,
        degree=p.degree,
        palindromic=p.is_palindromic(),
        catalan_at_1=int(poly_eval(p, 1)),
    )
    if n >= 2 and rec.degree != n * (n - 1):
        raise MismatchError("degree", n * (n - 1), rec.degree)
    if not rec.palindromic:
        raise MismatchError("palindromic", True, False)
    if any(c < 0 for c in p.coeffs):
        raise MismatchError("nonnegative coefficients", True, False)
    if n >= 2:
        zeros = [i for i, c in enumerate(p.coeffs) if c == 0]
        expected = sorted({1, n * (n - 1) - 1})
        if zeros != expected:
            raise MismatchError("zero coefficients", expected, zeros)
    if rec.catalan_at_1 != comb(2 * n, n) // (n + 1):
        raise MismatchError("catalan_at_1", comb(2 * n, n) // (n + 1), rec.catalan_at_1)
    return rec


def _dyck_words(n):
    word = []

    def rec(ups, downs):
        if ups == n and downs == n:
            yield word
            return
        if ups < n:
            word.append(1)
            yield from rec(ups + 1, downs)
            word.pop()
        if downs < ups:
            word.append(0)
            yield from rec(ups, downs + 1)
            word.pop()

    yield from rec(0, 0)


def major_index(word):
    """Sum of 1-indexed positions i with word[i] = Down and word[i+1] = Up (1 = Up)."""
    return sum(i + 1 for i in range(len(word) - 1) if word[i] == 0 and word[i + 1] == 1)


def qcatalan_dyck_oracle(n):
    """Brute-force sum of q^maj over all Dyck words of semilength n."""
    if not 2 <= n <= 12:
        raise DomainError("Dyck enumeration is limited to 2 <= n <= 12")
    counts = [0] * (n * (n - 1) + 1)
    for w in _dyck_words(n):
        counts[major_index(w)] += 1
    return IntPoly(counts)


@dataclass(frozen=True)
class SpecialValues:
    n: int
    C_at_0: Fraction
    Cprime_at_0: Fraction
    Csecond_at_0: Fraction
    C_at_1: Fraction
    Cprime_at_1: Fraction
    C_at_minus1: Fraction
    Cprime_at_minus1: Fraction
    Csecond_at_minus1: Fraction


def special_value_closed_forms(n):
    """The closed forms of the eight special values, keyed like SpecialValues."""
    cat = catalan_number(n)
    bc = comb(n, n // 2)
    b2 = comb(n, 2)
    if n % 2 == 0:
        c2m1 = Fraction(bc * n * n * (n + 1) * (3 * n - 5), 12)
    else:
        c2m1 = Fraction(bc * (n * n - 1) * (3 * n * n - 2 * n - 2), 12)
    return {
        "C_at_0": 1,
        "Cprime_at_0": 0,
        "Csecond_at_0": 2,
        "C_at_1": cat,
        "Cprime_at_1": b2 * cat,
        "C_at_minus1": bc,
        "Cprime_at_minus1": -b2 * bc,
        "Csecond_at_minus1": c2m1,
    }


def special_values(n):
    """Evaluate C_n, C_n', C_n'' at 0, 1, -1 and check them against the closed forms."""
    if n < 2:
        raise DomainError("special values need n >= 2")
    c = qcatalan_poly(n)
    c1 = poly_derivative(c)
    c2 = poly_derivative(c1)
    sv = SpecialValues(
        n=n,
        C_at_0=poly_eval(c, 0),
        Cprime_at_0=poly_eval(c1, 0),
        Csecond_at_0=poly_eval(c2, 0),
        C_at_1=poly_eval(c, 1),
        Cprime_at_1=poly_eval(c1, 1),
        C_at_minus1=poly_eval(c, -1),
        Cprime_at_minus1=poly_eval(c1, -1),
        Csecond_at_minus1=poly_eval(c2, -1),
    )
    for field, expected in special_value_closed_forms(n).items():
        actual = getattr(sv, field)
        if actual != expected:
            raise MismatchError(field, expected, actual)
    return sv


def f_recurrence_check(n):
    """(1 - q^{n+1}) C_n = (1 + q^n)(1 - q^{2n-1}) C_{n-1} as polynomials."""
    if n < 1:
        raise DomainError("recurrence needs n >= 1")
    lhs = one_minus_qk(n + 1) * qcatalan_poly(n)
    rhs = one_minus_qk(n, sign=1) * one_minus_qk(2 * n - 1) * qcatalan_poly(n - 1)
    return lhs == rhs


def binary_digit_sum(n):
    return bin(n).count("1")


def two_adic_valuation(n):
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    return (n & -n).bit_length() - 1


@dataclass(frozen=True)
class CentralParity:
    n: int
    central_coeff_odd: bool
    is_mersenne: bool
    nu_catalan: int
    s_binary: int


def central_parity(n):
    """Parity of the central coefficient of C_n(q) and the Legendre-formula valuation."""
    if n < 2:
        raise DomainError("central parity needs n >= 2")
    c = qcatalan_poly(n)
    central = c[comb(n, 2)]
    s = binary_digit_sum(n + 1)
    nu = s - 1
    rec = CentralParity(
        n=n,
        central_coeff_odd=bool(central & 1),
        is_mersenne=((n + 1) & n) == 0,
        nu_catalan=nu,
        s_binary=s,
    )
    if nu != two_adic_valuation(catalan_number(n)):
        raise MismatchError("nu_catalan", two_adic_valuation(catalan_number(n)), nu)
    if rec.central_coeff_odd != rec.is_mersenne:
        raise MismatchError("central parity", rec.is_mersenne, rec.central_coeff_odd)
    if rec.central_coeff_odd != bool(poly_eval(c, 1).numerator & 1):
        raise MismatchError("parity via C_n(1)", rec.central_coeff_odd, not rec.central_coeff_odd)
    return rec
