from fractions import Fraction
import random

import pytest

from qconvex.certify import (
    INF,
    Interval,
    Verdict,
    certify_convexity,
    certify_decreasing_left,
    certify_Fn,
    certify_Fn_parity_split,
    certify_Kn_Ln,
    certify_positive,
    certify_Qprime,
    certify_ratfun_positive,
    certify_Rn,
    count_real_roots,
    descartes_bound,
    isolate_roots,
    qbinomial_nonconvexity_witness,
    replay,
    root_multiplicity,
    sturm_chain,
)
from qconvex.errors import DomainError, NotDivisible, OddMultiplicityZero
from qconvex.exactpoly import IntPoly, RatFun, poly_derivative, poly_eval
from qconvex.qcore import q_binomial, qcatalan_poly

q = IntPoly([0, 1])
one = IntPoly([1])
R = Interval()


def P(*c):
    return IntPoly(list(c))


def test_sturm_examples():
    # remainder of q^2 - 1 by q is -1, negated to +1
    assert list(sturm_chain(P(-1, 0, 1)).polys) == [P(-1, 0, 1), P(0, 1), P(1)]
    assert list(sturm_chain(P(1, 0, 1)).polys) == [P(1, 0, 1), P(0, 1), P(-1)]
    assert count_real_roots(sturm_chain(P(-1, 0, 1)), Interval(-2, 2)) == 2
    assert count_real_roots(sturm_chain(P(1, 0, 1)), R) == 0
    c4 = poly_derivative(poly_derivative(qcatalan_poly(4)))
    assert count_real_roots(sturm_chain(c4), R) == 0


def test_interval_endpoints():
    ch = sturm_chain(P(-1, 0, 1))
    assert count_real_roots(ch, Interval(-1, 1)) == 0
    assert count_real_roots(ch, Interval.closed(-1, 1)) == 2
    assert count_real_roots(ch, Interval(-1, 1, False, True)) == 1
    assert count_real_roots(ch, Interval(1, INF)) == 0
    with pytest.raises(DomainError):
        Interval(1, 1)


def test_random_linear_factor_oracle():
    # product of known rational linear factors, some repeated: the count is known
    rng = random.Random(7)
    for _ in range(50):
        roots = [Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(rng.randint(1, 6))]
        p = one
        for r in roots:
            mult = rng.randint(1, 3)
            p = p * IntPoly([-r.numerator, r.denominator]) ** mult
        # an irreducible quadratic factor adds no real root
        p = p * P(rng.randint(1, 5), 0, 1)
        lo, hi = sorted(Fraction(rng.randint(-40, 40), rng.randint(1, 4)) for _ in range(2))
        if lo == hi:
            hi += 1
        iv = Interval(lo, hi)
        expected = len({r for r in roots if lo < r < hi})
        assert count_real_roots(sturm_chain(p), iv) == expected
        assert count_real_roots(sturm_chain(p), R) == len(set(roots))
        iso = isolate_roots(p, iv)
        assert len(iso) == expected
        for a, b in iso:
            # open intervals, or (r, r) for a root hit exactly by bisection
            assert sum(1 for r in set(roots) if a < r < b or a == r == b) == 1


def test_descartes_bound_is_an_upper_bound():
    rng = random.Random(11)
    for _ in range(200):
        roots = [Fraction(rng.randint(-30, 30), rng.randint(1, 5)) for _ in range(rng.randint(0, 5))]
        p = P(rng.randint(1, 4), rng.randint(-2, 2), 1)
        for r in roots:
            p = p * IntPoly([-r.numerator, r.denominator])
        lo = Fraction(rng.randint(-20, 20), rng.randint(1, 3))
        hi = lo + Fraction(rng.randint(1, 30), rng.randint(1, 3))
        for iv in (Interval(lo, hi), Interval.closed(lo, hi), Interval(lo, INF), Interval(-INF, hi)):
            exact = sum(1 for r in roots if iv.contains(r))
            b = descartes_bound(p, iv)
            assert b >= exact
            if iv.lo_open and iv.hi_open:
                assert (b - exact) % 2 == 0
    assert descartes_bound(P(1, 0, 1), R) is None


def test_root_multiplicity():
    p = (q - 1) ** 3 * (q + 2)
    assert root_multiplicity(p, 1) == 3
    assert root_multiplicity(p, -2) == 1
    assert root_multiplicity(p, 5) == 0


def test_certify_positive_examples():
    c = certify_positive(P(1, 0, 1), R)
    assert c.verdict == Verdict.POSITIVE_STRICT and replay(c)
    n2 = 2 * q * q * (one - q * q)
    c = certify_positive(n2, Interval(-1, 1), [(0, 2)])
    assert c.verdict == Verdict.POSITIVE_EXCEPT_ZEROS and replay(c)
    c = certify_positive(q**3 - q, Interval(0, 2))
    assert c.verdict == Verdict.FAILED
    assert 0 < c.witness < 1 and poly_eval(q**3 - q, c.witness) < 0
    assert replay(c)


def test_certify_positive_errors():
    with pytest.raises(OddMultiplicityZero):
        certify_positive(q * (q * q + 1), Interval(-1, 1), [(0, 1)])
    with pytest.raises(NotDivisible):
        certify_positive(P(1, 0, 1), R, [(1, 1)])


def test_failed_on_touching_zero():
    # (q - 1/3)^2 has no sign change; without listing the zero it is not strictly positive
    p = IntPoly([-1, 3]) ** 2
    c = certify_positive(p, Interval(0, 1))
    assert c.verdict == Verdict.FAILED and poly_eval(p, c.witness) == 0
    c = certify_positive(p, Interval(0, 1), [(Fraction(1, 3), 2)])
    assert c.verdict == Verdict.POSITIVE_EXCEPT_ZEROS


def test_ratfun_negative_denominator():
    # canonical form is (q^2 - 1)/(q^2 - 3): both parts negative on (-1, 1)
    f = RatFun(one - q * q, P(3) - q * q)
    c = certify_ratfun_positive(f, Interval(-1, 1))
    assert c.is_positive
    g = RatFun(one, q * q - 4)  # negative on (-1, 1)
    assert not certify_ratfun_positive(g, Interval(-1, 1)).is_positive
    h = RatFun(one, q)  # pole inside
    assert not certify_ratfun_positive(h, Interval(-1, 1)).is_positive


def test_convexity_examples():
    assert certify_convexity(2).verdict == Verdict.POSITIVE_STRICT
    c3 = certify_convexity(3)
    assert c3.polynomial == P(2, 6, 12, 0, 30)
    assert c3.verdict == Verdict.POSITIVE_STRICT


@pytest.mark.parametrize("n", range(2, 9))
def test_convexity_against_dense_sampling(n):
    c = certify_convexity(n)
    assert replay(c)
    c2 = c.polynomial
    for k in range(-300, 301):
        assert poly_eval(c2, Fraction(k, 50)) > 0


@pytest.mark.parametrize("n", range(2, 9))
def test_Fn(n):
    c = certify_Fn(n)
    assert c.is_positive
    assert dict(c.factored_zeros)[Fraction(1)] >= 1 and dict(c.factored_zeros)[Fraction(-1)] >= 1


def test_F2_zeros_simple():
    c = certify_Fn(2)
    assert dict(c.factored_zeros) == {Fraction(1): 1, Fraction(-1): 1}


def test_parity_split():
    assert certify_Fn_parity_split(2).verdict == Verdict.IDENTICALLY_ZERO
    for n in range(3, 9):
        c = certify_Fn_parity_split(n)
        assert c.verdict == Verdict.POSITIVE_EXCEPT_ZEROS or c.verdict == Verdict.POSITIVE_STRICT
        assert c.is_positive


def test_Qprime_and_Rn():
    c = certify_Qprime(2)
    assert c.is_positive and c.factored_zeros == ((Fraction(0), 2),)
    for n in range(3, 9):
        assert certify_Qprime(n).is_positive
    for n in range(2, 9):
        r1, r2 = certify_Rn(n)
        assert r1.is_positive and r2.is_positive


def test_Kn_Ln():
    for n in range(2, 12):
        c = certify_Kn_Ln(n)
        assert c.is_positive, n
    c3 = certify_Kn_Ln(3)
    assert c3.target == ("Ln", 3)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_Ln_grid_sanity(n):
    from qconvex.qfuncs import build_Ln

    L = build_Ln(n)
    for k in range(1, 100):
        assert L(Fraction(-k, 100)) > 0


def test_decreasing_left():
    for n in range(2, 10):
        assert certify_decreasing_left(n).verdict == Verdict.POSITIVE_STRICT
    for x in (Fraction(-3, 2), Fraction(-5)):
        assert poly_eval(poly_derivative(qcatalan_poly(5)), x) < 0


def test_nonconvexity_witness():
    assert qbinomial_nonconvexity_witness(2) is None
    w = qbinomial_nonconvexity_witness(3)
    assert w is not None and -1 < w < 0
    d2 = poly_derivative(poly_derivative(q_binomial(6, 3)))
    assert poly_eval(d2, w) < 0


def test_cert_serialises():
    d = certify_Fn(3).to_dict()
    assert d["verdict"] in ("PositiveStrict", "PositiveExceptListedZeros")
    assert d["interval"] == {"lo": "-1", "hi": "1", "lo_open": True, "hi_open": True}
