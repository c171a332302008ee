"""Acceptance suite: one PASS/FAIL line per criterion, with its time budget.

Run with ``pytest tests/test_acceptance.py -s`` (or ``python tests/test_acceptance.py``)
to see the lines; under plain ``pytest`` they are written to the terminal as well.
"""

import math
import sys
import time
from fractions import Fraction
from math import comb

import pytest

from qconvex.certify import (
    Verdict,
    certify_convexity,
    certify_Fn,
    certify_Kn_Ln,
    certify_Qprime,
    qbinomial_nonconvexity_witness,
    replay,
)
from qconvex.exactpoly import poly_derivative, poly_eval
from qconvex.partitions import F_derivatives_at, F_series, convergence_probe, partition_numbers
from qconvex.qcore import (
    catalan_number,
    central_parity,
    q_binomial,
    qcatalan_dyck_oracle,
    qcatalan_poly,
    special_value_closed_forms,
    special_values,
    two_adic_valuation,
)
from qconvex.qfuncs import (
    AK_PUBLISHED,
    L3_T1_PUBLISHED,
    L3_expansion,
    U1_alpha_check,
    ak_identity_check,
    build_Qn,
    identity_suite,
)
from qconvex.sosfactor import build_AB


def criterion_1():
    bad = [n for n in range(2, 13) if not identity_suite(n).all_hold]
    return not bad, f"identities n=2..12, failing {bad}"


def criterion_2():
    bad = []
    for n in range(2, 31):
        sv = special_values(n)  # raises on mismatch
        expected = special_value_closed_forms(n)
        if any(getattr(sv, k) != v for k, v in expected.items()):
            bad.append(n)
    # both parity branches of C_n''(-1) are exercised
    return not bad, f"8 special values n=2..30, failing {bad}"


def criterion_3():
    bad = [n for n in range(2, 10) if qcatalan_dyck_oracle(n) != qcatalan_poly(n)]
    return not bad, f"maj enumeration vs product formula n=2..9, failing {bad}"


def criterion_4():
    bad = []
    for n in range(2, 16):
        c = certify_convexity(n)
        ok = c.verdict == Verdict.POSITIVE_STRICT and c.root_count_interior == 0
        ok = ok and poly_eval(c.polynomial, c.sample_point) > 0 and replay(c)
        if not ok:
            bad.append(n)
    return not bad, f"C_n'' root-free on R with positive sample, replayed, n=2..15, failing {bad}"


def criterion_5():
    bad = []
    for n in range(2, 21):
        F = build_Qn(n).Fn
        if F(1) != 0 or F(-1) != 0 or not certify_Fn(n).is_positive:
            bad.append(("Fn", n))
        if not certify_Qprime(n).is_positive:
            bad.append(("Nn", n))
    for n in range(2, 41, 2):
        c = certify_Kn_Ln(n)
        k0 = dict(c.factored_zeros).get(Fraction(0), 0)
        if not c.is_positive or k0 % 2:
            bad.append(("Kn", n))
    return not bad, f"F_n, N_n (n=2..20) and K_n (even n<=40), failing {bad}"


def criterion_6():
    bad = []
    for n in range(3, 42, 2):
        c = certify_Kn_Ln(n)
        if not c.is_positive:
            bad.append((n, str(c.witness)))
    return not bad, f"L_n > 0 on (-1, 0) for odd n=3..41, counterexamples {bad}"


def criterion_7():
    ak = tuple(ak_identity_check(strict=False))
    l3 = L3_expansion()
    bad_alpha = [n for n in range(2, 31) if not (lambda r: r.match and r.pairing_ok)(U1_alpha_check(n))]
    ok = ak == AK_PUBLISHED and l3.shifted == L3_T1_PUBLISHED and l3.den_matches and not bad_alpha
    return ok, f"a_k match {ak == AK_PUBLISHED}, L_3 expansion match {l3.shifted == L3_T1_PUBLISHED}, alpha failing {bad_alpha}"


def criterion_8():
    worst = 0.0
    bad = []
    for n in range(2, 9):
        d = build_AB(n, tol=1e-8)
        worst = max(worst, d.grid_residual_sup)
        if d.grid_residual_sup > 1e-8:
            bad.append(n)
    d2 = build_AB(2)
    a = d2.A.to_monomial().coeffs
    b = d2.B.to_monomial().coeffs
    eps = 4 * sys.float_info.epsilon
    exact2 = all(abs(v) <= eps for v in a) and len(b) == 2 and abs(b[0]) <= eps
    exact2 = exact2 and abs(abs(b[1]) - math.sqrt(2)) <= eps
    return not bad and exact2, f"sup residual {worst:.2e} over n=2..8, failing {bad}, n=2 exact {exact2}"


def criterion_9():
    p = partition_numbers(200)
    c = F_series(200).coeffs
    series_ok = c[0] == 1 and all(c[n] == p[n] - p[n - 1] for n in range(1, 201))
    grid = [Fraction(-9, 10) + Fraction(9, 5) * Fraction(i, 32) for i in range(33)]
    second_ok = all(F_derivatives_at(g).Fsecond > 0 for g in grid)
    errs = [e for _, e in convergence_probe(grid, (4, 6, 8, 10))]
    probe_ok = all(a > b for a, b in zip(errs, errs[1:]))
    return series_ok and second_ok and probe_ok, (
        f"F_series {series_ok}, F''>0 on 33 points {second_ok}, probe sups {['%.6g' % e for e in errs]}"
    )


def criterion_10():
    bad = []
    for n in range(2, 65):
        c = qcatalan_poly(n)
        odd = bool(c[comb(n, 2)] & 1)
        mersenne = ((n + 1) & n) == 0
        nu_ok = two_adic_valuation(catalan_number(n)) == bin(n + 1).count("1") - 1
        if odd != mersenne or not nu_ok or central_parity(n).central_coeff_odd != odd:
            bad.append(n)
    return not bad, f"central parity vs Mersenne and nu(Catalan) n=2..64, failing {bad}"


def criterion_11():
    for n in range(2, 9):
        w = qbinomial_nonconvexity_witness(n)
        if w is None:
            continue
        v = poly_eval(poly_derivative(poly_derivative(q_binomial(2 * n, n))), w)
        if v < 0:
            return True, f"n={n}, q*={w}, second derivative {float(v):.6g} < 0"
    return False, "no witness for n <= 8"


CRITERIA = [
    (1, criterion_1, 10),
    (2, criterion_2, 30),
    (3, criterion_3, 60),
    (4, criterion_4, 600),
    (5, criterion_5, 300),
    (6, criterion_6, 900),
    (7, criterion_7, 60),
    (8, criterion_8, 60),
    (9, criterion_9, 60),
    (10, criterion_10, 120),
    (11, criterion_11, 30),
]


def evaluate(k, fn, budget):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    in_time = dt <= budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"{status} criterion {k}: {detail} [{dt:.1f}s / {budget}s]"
    return ok and in_time, line


@pytest.mark.parametrize("k,fn,budget", CRITERIA, ids=[f"criterion_{k}" for k, _, _ in CRITERIA])
def test_criterion(k, fn, budget, capsys):
    ok, line = evaluate(k, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
