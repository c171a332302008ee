"""Rational functions built from the q-Catalan polynomials and the identities linking them.

Substitutions q -> 1/q are carried out on numerator/denominator pairs through
degree-bounded reversal, so no Laurent polynomials appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DomainError, MismatchError, NotDivisible, ParityError
from .exactpoly import (
    IntPoly,
    RatFun,
    one_minus_qk,
    poly_derivative,
    poly_divexact,
    poly_reversal,
    poly_shift_basis,
)
from .qcore import catalan_number, qcatalan_poly

__all__ = [
    "QnBundle",
    "PhiFamily",
    "build_Qn",
    "special_Q_values",
    "identity_suite",
    "build_phi",
    "phi",
    "q2_Qprime",
    "build_Kn",
    "build_Ln",
    "build_Rn",
    "U1_alpha_check",
    "K3_xm_check",
    "x_m",
    "ak_identity_check",
    "AK_PUBLISHED",
    "L3_T1_PUBLISHED",
    "L3Expansion",
    "L3_expansion",
    "build_Y",
    "conjecture_X_expansion",
    "to_t_variable",
    "term_inequality_holds",
]

Q = IntPoly.monomial(1)

AK_PUBLISHED = (
    2225214522, 9975561651, 19501465967, 22337785440, 16851826471,
    8872479001, 3355972074, 921381440, 182598704, 25512480, 2388160,
    134592, 3456,
)

L3_T1_PUBLISHED = (33, 258, 691, 1012, 913, 548, 249, 108, 46, 14, 2)


def _sum(terms):
    # balanced pairwise summation keeps intermediate denominators small
    terms = list(terms)
    if not terms:
        return RatFun(0)
    while len(terms) > 1:
        nxt = [terms[i] + terms[i + 1] for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0]


@dataclass(frozen=True)
class QnBundle:
    n: int
    Qn: RatFun
    Fn: RatFun
    q2Qnprime: RatFun
    Nn_num: IntPoly
    Nn_den: IntPoly


@lru_cache(maxsize=64)
def build_Qn(n):
    """Logarithmic derivative Q_n = C_n'/C_n from its partial-fraction sum."""
    if n < 2:
        raise DomainError("Q_n needs n >= 2")

    def term(j):
        return RatFun(IntPoly.monomial(j - 1, j), one_minus_qk(j))

    Qn = _sum([term(j) for j in range(2, n + 1)]) - _sum([term(j) for j in range(n + 2, 2 * n + 1)])
    c = qcatalan_poly(n)
    if poly_derivative(c) * Qn.den != c * Qn.num:
        raise MismatchError("C_n' = C_n Q_n", True, False)
    Fn = comb(n, 2) - Q * Qn
    q2 = Q * Q * Qn.derivative()
    for x in (-1, 0, 1):
        if q2.den(x) == 0:
            raise MismatchError(f"N_n denominator nonzero at {x}", True, False)
    return QnBundle(n=n, Qn=Qn, Fn=Fn, q2Qnprime=q2, Nn_num=q2.num, Nn_den=q2.den)


def q2_Qprime(n):
    """q^2 Q_n'(q); zero for n < 2 (empty product, C_n = 1)."""
    if n < 2:
        return RatFun(0)
    return build_Qn(n).q2Qnprime


@dataclass(frozen=True)
class SpecialQValues:
    n: int
    Q_at_minus1: Fraction
    Qprime_at_minus1: Fraction
    claimed_Qprime_at_minus1: Fraction
    claim_holds: bool


def special_Q_values(n):
    """Q_n(-1) (checked against -binom(n,2)) and Q_n'(-1) next to the value 2/Catalan(n).

    The second pair is reported, not asserted: they already differ at n = 2.
    """
    b = build_Qn(n)
    q_m1 = b.Qn(-1)
    if q_m1 != -comb(n, 2):
        raise MismatchError("Q_n(-1)", -comb(n, 2), q_m1)
    qp_m1 = b.Qn.derivative()(-1)
    claimed = Fraction(2, catalan_number(n))
    return SpecialQValues(n, q_m1, qp_m1, claimed, qp_m1 == claimed)


@dataclass(frozen=True)
class IdentityResult:
    n: int
    lemma22: bool
    lemma23: bool
    eq22: bool

    @property
    def all_hold(self):
        return self.lemma22 and self.lemma23 and self.eq22

    def failing(self):
        return [k for k in ("lemma22", "lemma23", "eq22") if not getattr(self, k)]


def identity_suite(n):
    """Check the three reflection identities for C_n as cleared polynomial identities.

    lemma22:  q Q(q) + q^{-1} Q(1/q) = N
    lemma23:  q^{N-3} C''(1/q) = q C''(q) + (N-1)(N C(q)/q - 2 C'(q))
    eq22:     q^{N-2} C''(1/q) = q^2 C''(q) + 2(N-1) C(q) F(q)
    with N = n(n-1).
    """
    if n < 2:
        raise DomainError("identities need n >= 2")
    N = n * (n - 1)
    b = build_Qn(n)
    a, d = b.Qn.num, b.Qn.den
    D = max(a.degree, d.degree)
    ra, rd = poly_reversal(a, D), poly_reversal(d, D)
    # q a/d + ra/(q rd) = N   <=>   q^2 a rd + ra d = N q d rd
    lemma22 = (Q * Q * a * rd + ra * d) == N * Q * d * rd

    c = qcatalan_poly(n)
    c1 = poly_derivative(c)
    c2 = poly_derivative(c1)
    rc2 = poly_reversal(c2, N - 2)  # q^{N-2} C''(1/q)
    # times q:  q^{N-2} C''(1/q) = q^2 C'' + (N-1)(N C - 2 q C')
    lemma23 = rc2 == Q * Q * c2 + (N - 1) * (N * c - 2 * Q * c1)

    fn, fd = b.Fn.num, b.Fn.den
    eq22 = rc2 * fd == Q * Q * c2 * fd + 2 * (N - 1) * c * fn
    return IdentityResult(n, lemma22, lemma23, eq22)


@dataclass(frozen=True)
class PhiFamily:
    j: int
    phi: RatFun


@lru_cache(maxsize=512)
def phi(j):
    """j q^j (q^j + j - 1) / (1 - q^j)^2."""
    if j < 1:
        raise DomainError("phi_j needs j >= 1")
    num = IntPoly.monomial(j, j) * (IntPoly.monomial(j) + (j - 1))
    return RatFun(num, one_minus_qk(j) ** 2)


def build_phi(j):
    if j < 2:
        raise DomainError("phi_j needs j >= 2")
    return PhiFamily(j, phi(j))


def build_Kn(n, check=True):
    """K_n = phi_n + phi_{n+1} - phi_{2n-1} - phi_{2n} for even n."""
    if n < 2:
        raise DomainError("K_n needs n >= 2")
    if n % 2:
        raise ParityError("K_n is defined for even n")
    K = _sum([phi(n), phi(n + 1)]) - _sum([phi(2 * n - 1), phi(2 * n)])
    if check and K != q2_Qprime(n) - q2_Qprime(n - 1):
        raise MismatchError("K_n = q^2 Q_n' - q^2 Q_{n-1}'", True, False)
    return K


def build_Ln(n, check=True):
    """L_n = 2 phi_n + phi_{n-1} + phi_{n+1} - phi_{2n-3} - phi_{2n-2} - phi_{2n-1} - phi_{2n}, odd n."""
    if n < 3:
        raise DomainError("L_n needs n >= 3")
    if n % 2 == 0:
        raise ParityError("L_n is defined for odd n")
    pos = _sum([phi(n), phi(n), phi(n - 1), phi(n + 1)])
    neg = _sum([phi(2 * n - 3), phi(2 * n - 2), phi(2 * n - 1), phi(2 * n)])
    L = pos - neg
    if check and L != q2_Qprime(n) - q2_Qprime(n - 2):
        raise MismatchError("L_n = q^2 Q_n' - q^2 Q_{n-2}'", True, False)
    return L


@dataclass(frozen=True)
class RnPair:
    n: int
    R1: RatFun
    R2: RatFun
    telescopes: bool


def build_Rn(n):
    """R_n^(1), R_n^(2) with q^{n+1}(R1 + R2) = q^2 Q_{n+1}' - q^2 Q_n'."""
    if n < 2:
        raise DomainError("R_n needs n >= 2")
    q = Q

    def frac(num, k):
        return RatFun(num, one_minus_qk(k) ** 2)

    R1 = frac((n + 1) * (q ** (n + 1) + n), n + 1) - frac(
        (2 * n + 1) * q ** n * (q ** (2 * n + 1) + 2 * n), 2 * n + 1
    )
    R2 = frac((n + 2) * q * (q ** (n + 2) + (n + 1)), n + 2) - frac(
        (2 * n + 2) * q ** (n + 1) * (q ** (2 * n + 2) + (2 * n + 1)), 2 * n + 2
    )
    lhs = IntPoly.monomial(n + 1) * (R1 + R2)
    ok = lhs == q2_Qprime(n + 1) - q2_Qprime(n)
    return RnPair(n, R1, R2, ok)


def _binom0(a, b):
    # binomial with the convention binom(a, b) = 0 when a < b or a < 0
    if a < 0 or a < b:
        return 0
    return comb(a, b)


def alpha_coefficients(n):
    """Coefficients of U_n^(1) from the eight-term binomial formula."""
    out = []
    for j in range(5 * n):
        out.append(
            n * (n + 1) * _binom0(j + 3, 3)
            - 2 * n * (2 * n + 1) * _binom0(j - n + 3, 3)
            + (n + 1) * _binom0(j - n + 2, 3)
            + 2 * n * (3 * n + 1) * _binom0(j - 2 * n + 2, 3)
            - (2 * n + 1) * _binom0(j - 3 * n + 2, 3)
            - (4 * n * n + 4 * n + 2) * _binom0(j - 3 * n + 1, 3)
            + (n * n + 5 * n + 2) * _binom0(j - 4 * n + 1, 3)
            - n * _binom0(j - 5 * n, 3)
        )
    return out


@dataclass(frozen=True)
class U1AlphaResult:
    n: int
    U1: IntPoly
    alpha: tuple
    match: bool
    pairing_ok: bool


def U1_alpha_check(n):
    """Expand U_n^(1) by exact division and compare with the alpha_j formula."""
    if n < 2:
        raise DomainError("U_n^(1) needs n >= 2")
    q = Q
    top = (n + 1) * (q ** (n + 1) + n) * one_minus_qk(2 * n + 1) ** 2 - (
        2 * n + 1
    ) * q ** n * (q ** (2 * n + 1) + 2 * n) * one_minus_qk(n + 1) ** 2
    U1 = poly_divexact(top, one_minus_qk(1) ** 4)
    alpha = alpha_coefficients(n)
    match = list(U1.coeffs) == alpha
    last = 5 * n - 1
    pairing = all(alpha[j] >= -alpha[last - j] for j in range(2 * n)) and all(
        alpha[j] > 0 for j in range(3 * n - 1)
    )
    return U1AlphaResult(n, U1, tuple(alpha), match, pairing)


def x_m(m):
    """((2m+1)(3m-1) / (3m(2m-1)))^{3m} as an exact rational."""
    return Fraction((2 * m + 1) * (3 * m - 1), 3 * m * (2 * m - 1)) ** (3 * m)


@dataclass(frozen=True)
class K3Result:
    m: int
    K3: IntPoly
    K3_positive: bool
    x_m: Fraction
    x_m_float: float
    below_15_2: bool
    monotone: bool | None  # x_m > x_{m-1}; None for m = 1
    special_case_ok: bool  # the direct inequality used for small m


def K3_xm_check(m):
    """5q^{3m} - (2m+1)q + 2m - 1 on (0, 1), plus the x_m bound and monotonicity data."""
    from .certify import Interval, certify_positive  # certify imports this module

    if m < 1:
        raise DomainError("K3 needs m >= 1")
    K3 = IntPoly.monomial(3 * m, 5) - (2 * m + 1) * Q + (2 * m - 1)
    cert = certify_positive(K3, Interval(0, 1), target=("K3", m))
    xm = x_m(m)
    special = Fraction(3 * m * (2 * m - 1), (2 * m + 1) * (3 * m - 1)) ** (3 * m - 1) > Fraction(
        2 * m + 1, 15 * m
    )
    return K3Result(
        m=m,
        K3=K3,
        K3_positive=cert.is_positive,
        x_m=xm,
        x_m_float=float(xm),
        below_15_2=xm < Fraction(15, 2),
        monotone=None if m == 1 else xm > x_m(m - 1),
        special_case_ok=special,
    )


def ak_identity_check(strict=True):
    """Coefficients a_0..a_12 of the numerator identity for T(m), in powers of (m - 3).

    Works in Q(m): w = (8m^2+4m-1)/((2m+1)^2 (m+1)(3m-1)),
    T = 1 - m w + binom(m,2) w^2 - binom(m,3) w^3, and the numerator of
    18 (T (2m+3)(3m+2)/((3m+3)(2m+1)) - 1) (m+1)^4 (2m+1)^7 (3m-1)^3.
    """
    m = Q
    w = RatFun(8 * m * m + 4 * m - 1, (2 * m + 1) ** 2 * (m + 1) * (3 * m - 1))
    b2 = RatFun(m * (m - 1), 2)
    b3 = RatFun(m * (m - 1) * (m - 2), 6)
    T = 1 - m * w + b2 * w ** 2 - b3 * w ** 3
    lhs = T * RatFun((2 * m + 3) * (3 * m + 2), (3 * m + 3) * (2 * m + 1)) - 1
    scaled = lhs * (18 * (m + 1) ** 4 * (2 * m + 1) ** 7 * (3 * m - 1) ** 3)
    if not scaled.is_polynomial:
        raise MismatchError("cleared T(m) identity is a polynomial", True, str(scaled.den))
    coeffs = [int(u) for u in poly_shift_basis(scaled.num, 3)]
    if strict:
        if len(coeffs) != len(AK_PUBLISHED):
            raise MismatchError("number of a_k", len(AK_PUBLISHED), len(coeffs))
        for k, (mine, pub) in enumerate(zip(coeffs, AK_PUBLISHED)):
            if mine != pub:
                raise MismatchError(f"a_{k}", pub, mine)
    return coeffs


def to_t_variable(f):
    """f(-1/t) as a canonical rational function of t."""
    return f.reciprocal_substitution(sign=-1)


def build_Y(m):
    """The five-term function Y_{2m+1}(t) (equal to L_n(-1/t) + phi_{2n-1}(-1/t), n = 2m+1)."""
    t = Q

    def tp(k, s):
        return IntPoly.monomial(k) + s

    terms = [
        RatFun((4 * m - 1) * ((4 * m - 2) * t ** (4 * m - 1) - 1), tp(4 * m - 1, 1) ** 2),
        RatFun(2 * m * ((2 * m - 1) * t ** (2 * m) - 1), tp(2 * m, 1) ** 2),
        RatFun((2 * m + 2) * ((2 * m + 1) * t ** (2 * m + 2) + 1), tp(2 * m + 2, -1) ** 2),
        RatFun(-(2 * m + 1) * (2 * m * t ** (2 * m + 1) - 1), tp(2 * m + 1, 1) ** 2),
        RatFun(-(2 * m + 1) * (2 * m * t ** (2 * m + 1) + 1), tp(2 * m + 1, -1) ** 2),
    ]
    return terms


@dataclass(frozen=True)
class XExpansion:
    """X in the (t-1) basis.

    X vanishes to order ``zero_order`` at t = 1 (the leading U_j are exactly
    zero), so ``all_positive`` means: every U_j past that block is > 0.
    """

    m: int
    X: IntPoly
    U: tuple
    all_positive: bool
    zero_order: int


def conjecture_X_expansion(m):
    """Clear Y_{2m+1} by (t^{4m-1}+1)^2 (t^{4m+2}-1)^2 (t^{2m+2}-1)^2 (t^{2m}+1)^2, expand at t = 1."""
    if not 1 <= m <= 20:
        raise DomainError("X expansion is capped at 1 <= m <= 20")

    def tp(k, s):
        return IntPoly.monomial(k) + s

    clear = (tp(4 * m - 1, 1) * tp(4 * m + 2, -1) * tp(2 * m + 2, -1) * tp(2 * m, 1)) ** 2
    X = IntPoly()
    for term in build_Y(m):
        # each term's canonical denominator must divide the clearing product
        try:
            X = X + term.num * poly_divexact(clear, term.den)
        except NotDivisible:
            raise NotDivisible(f"clearing factor misses a denominator factor of Y term {term}")
    U = tuple(int(u) for u in poly_shift_basis(X, 1))
    k = next(i for i, u in enumerate(U) if u)
    return XExpansion(m, X, U, all(u > 0 for u in U[k:]), k)


@dataclass(frozen=True)
class L3Expansion:
    num: IntPoly
    den: IntPoly
    shifted: tuple  # numerator coefficients in powers of (t - 1)
    den_matches: bool  # den == (t^2+t+1)^2 (t^4-t^3+t^2-t+1)^2
    matches_published: bool


def L3_expansion():
    """L_3 in t = -1/q, and its numerator expanded in powers of (t - 1)."""
    f = to_t_variable(build_Ln(3))
    shifted = tuple(int(c) for c in poly_shift_basis(f.num, 1))
    den = (IntPoly([1, 1, 1]) * IntPoly([1, -1, 1, -1, 1])) ** 2
    return L3Expansion(f.num, f.den, shifted, f.den == den, shifted == L3_T1_PUBLISHED)


def term_inequality_holds(j, n, t):
    """2j/(t^-j - t^j) > 2(n+j)/(t^-(n+j) - t^(n+j)) for rational 0 < t < 1."""
    t = Fraction(t)
    lhs = Fraction(2 * j) / (t ** -j - t ** j)
    rhs = Fraction(2 * (n + j)) / (t ** -(n + j) - t ** (n + j))
    return lhs > rhs
