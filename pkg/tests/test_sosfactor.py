import math
from fractions import Fraction

import numpy as np
import pytest

from qconvex.errors import ConvergenceFailure, DomainError, ZeroPolynomial
from qconvex.exactpoly import IntPoly, poly_eval
from qconvex.qfuncs import build_Qn
from qconvex.sosfactor import FloatPoly, build_AB, cosine_lift, decompose, numeric_roots


def P(*c):
    return IntPoly(list(c))


def test_lift_examples():
    # (2z)^2 (1 + ((z + 1/z)/2)^2) = 4z^2 + (z^2 + 1)^2
    assert cosine_lift(P(1, 0, 1)) == P(1, 0, 6, 0, 1)
    assert cosine_lift(P(0, 1)) == P(1, 0, 1)
    assert cosine_lift(P(3)) == P(3)
    with pytest.raises(ZeroPolynomial):
        cosine_lift(IntPoly())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lift_is_palindromic_and_consistent(n):
    N = build_Qn(n).Nn_num
    G = cosine_lift(N)
    assert G.is_palindromic()
    assert G.degree == 2 * N.degree
    # G(z) = (2z)^d N((z + 1/z)/2) at a rational point
    z = Fraction(3, 5)
    assert poly_eval(G, z) == (2 * z) ** N.degree * poly_eval(N, (z + 1 / z) / 2)


def test_numeric_roots_examples():
    r = sorted(numeric_roots(P(-1, 0, 1)), key=lambda c: c.real)
    assert abs(r[0] + 1) < 1e-14 and abs(r[1] - 1) < 1e-14
    r = numeric_roots(P(1, 0, 6, 0, 1))
    mags = sorted(abs(x) for x in r)
    assert abs(mags[0] - (math.sqrt(2) - 1)) < 1e-12
    assert abs(mags[-1] - (math.sqrt(2) + 1)) < 1e-12
    assert len(numeric_roots(P(0, 0, 1, 1))) == 3
    with pytest.raises(ConvergenceFailure):
        numeric_roots(P(1, 1, 1), tol=-1.0)


def test_lift_roots_come_in_inverse_pairs():
    G = cosine_lift(build_Qn(4).Nn_num)
    roots = numeric_roots(G)
    for z in roots:
        if abs(z) > 1e-9:
            w = 1 / z.conjugate()
            assert min(abs(w - y) for y in roots) < 1e-6


def test_n2_exact():
    d = build_AB(2)
    assert d.grid_residual_sup < 1e-14
    a = d.A.to_monomial().coeffs
    b = d.B.to_monomial().coeffs
    assert all(abs(c) < 1e-14 for c in a)
    assert len(b) == 2 and abs(b[0]) < 1e-14 and abs(abs(b[1]) - math.sqrt(2)) < 1e-14


@pytest.mark.parametrize("n", [3, 4, 5])
def test_small_n(n):
    N = build_Qn(n).Nn_num
    d = build_AB(n)
    assert d.grid_residual_sup <= 1e-8
    assert d.A.degree <= N.degree // 2 and d.B.degree <= (N.degree - 2) // 2 + 1
    for x in (-1.0, 1.0):
        assert abs(d.A(x) ** 2 - float(poly_eval(N, int(x)))) <= 1e-8 * (1 + abs(float(poly_eval(N, int(x)))))
    xs = np.linspace(-1, 1, 257)
    assert np.all(d.A(xs) ** 2 + (1 - xs**2) * d.B(xs) ** 2 >= -1e-9)


def test_decompose_rejects_sign_change():
    with pytest.raises(DomainError):
        decompose(P(0, 1))
    with pytest.raises(ZeroPolynomial):
        decompose(IntPoly())


def test_decompose_with_real_double_root():
    # (4q^2 - 1)^2 (2 - q): double roots at +/- 1/2 inside (-1, 1)
    N = P(-1, 0, 4) ** 2 * P(2, -1)
    d = decompose(N)
    assert d.grid_residual_sup < 1e-10


def test_floatpoly():
    p = FloatPoly((1.0, 2.0, 0.0))
    assert p.degree == 1 and p(2.0) == 5.0
    c = FloatPoly((0.0, 0.0, 1.0), "chebyshev")  # T_2 = 2x^2 - 1
    assert c.to_monomial().coeffs == (-1.0, 0.0, 2.0)
    with pytest.raises(DomainError):
        FloatPoly((float("nan"),))
    with pytest.raises(DomainError):
        FloatPoly((1.0,), "legendre")
