"""Sturm-sequence root counting and replayable positivity certificates.

Positivity checks first try Descartes' rule of signs on the interval mapped
to (0, inf): zero sign variations proves there is no root, at the cost of one
Taylor shift. Anything else falls back to an exact Sturm count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpz

from .errors import DomainError, NotDivisible, OddMultiplicityZero, ParityError, ZeroPolynomial
from .exactpoly import IntPoly, RatFun, _taylor_shift, poly_derivative, poly_divexact, poly_eval

__all__ = [
    "SturmChain",
    "Interval",
    "Verdict",
    "PositivityCert",
    "sturm_chain",
    "count_real_roots",
    "descartes_bound",
    "certify_positive",
    "certify_ratfun_positive",
    "replay",
    "isolate_roots",
    "certify_convexity",
    "certify_Fn",
    "certify_Fn_parity_split",
    "certify_Qprime",
    "certify_Rn",
    "certify_Kn_Ln",
    "certify_decreasing_left",
    "qbinomial_nonconvexity_witness",
]

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """Interval with rational or infinite endpoints; open by default."""

    lo: Fraction | float = -INF
    hi: Fraction | float = INF
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        lo = self.lo if self.lo == -INF else Fraction(self.lo)
        hi = self.hi if self.hi == INF else Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == -INF:
            object.__setattr__(self, "lo_open", True)
        if hi == INF:
            object.__setattr__(self, "hi_open", True)
        if not lo < hi:
            raise DomainError(f"empty interval ({lo}, {hi})")

    @classmethod
    def closed(cls, lo, hi):
        return cls(lo, hi, False, False)

    def contains(self, x):
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True

    def sample_point(self, avoid=()):
        """A rational interior point, away from the listed points."""
        lo, hi = self.lo, self.hi
        if lo == -INF and hi == INF:
            cands = [Fraction(0), Fraction(1), Fraction(-1)]
        elif lo == -INF:
            cands = [hi - 1, hi - 2]
        elif hi == INF:
            cands = [lo + 1, lo + 2]
        else:
            cands = [(lo + hi) / 2, (3 * lo + hi) / 4, (lo + 3 * hi) / 4]
        for c in cands:
            if c not in avoid:
                return c
        return cands[0] + Fraction(1, 7919) * (1 if hi != INF else -1)

    def to_dict(self):
        def enc(x):
            return "-inf" if x == -INF else "inf" if x == INF else str(x)

        return {"lo": enc(self.lo), "hi": enc(self.hi), "lo_open": self.lo_open, "hi_open": self.hi_open}

    def __str__(self):
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class SturmChain:
    """Signed remainder sequence with primitive-part normalisation.

    ``polys[0]`` is the primitive part of the input, ``polys[1]`` that of its
    derivative, then negated pseudo-remainders (positive multipliers only).
    At a point where the last element vanishes (a multiple root) the chain is
    evaluated divided by that element, so multiple roots are counted once.
    """

    polys: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    @property
    def gcd(self):
        return self.polys[-1]

    def _reduced(self):
        if "reduced" not in self._cache:
            g = self.polys[-1]
            self._cache["reduced"] = tuple(poly_divexact(c, g) for c in self.polys)
        return self._cache["reduced"]

    def variations(self, x):
        """Sign changes of the chain at x (rational, or +/-inf)."""
        chain = self.polys
        finite = x not in (INF, -INF)
        if finite and self.gcd.degree > 0 and poly_eval(self.gcd, x) == 0:
            chain = self._reduced()
        signs = []
        for p in chain:
            if x == INF:
                s = 1 if p.lc > 0 else -1
            elif x == -INF:
                s = 1 if (p.lc > 0) == (p.degree % 2 == 0) else -1
            else:
                v = poly_eval(p, x)
                s = (v > 0) - (v < 0)
            if s:
                signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _content(c):
    g = mpz(0)
    for v in sorted(c, key=abs):
        g = gmpy2.gcd(g, v)
        if g == 1:
            break
    return g


def _primitive(c):
    g = _content(c)
    if g > 1:
        c = [gmpy2.divexact(v, g) for v in c]
    return c


def _prem_positive(a, b):
    # remainder of m*a by b with m > 0, on mpz coefficient lists
    r = list(a)
    db = len(b) - 1
    lcb = b[-1]
    sgn = 1 if lcb > 0 else -1
    alcb = abs(lcb)
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        lr = r[-1]
        g = gmpy2.gcd(lr, lcb)
        mr = alcb // g
        mb = sgn * lr // g
        if mr != 1:
            r = [v * mr for v in r]
        for i in range(db + 1):
            bi = b[i]
            if bi:
                r[k + i] -= mb * bi
        r.pop()
        while r and not r[-1]:
            r.pop()
    return r


def sturm_chain(p):
    """Sturm sequence of a nonzero polynomial."""
    if not p:
        raise ZeroPolynomial("Sturm chain of the zero polynomial")
    # GMP integers in the inner loop; this is where all the time goes
    p0 = _primitive([mpz(c) for c in p.coeffs])
    chain = [p0]
    if len(p0) > 1:
        p1 = _primitive([i * p0[i] for i in range(1, len(p0))])
        chain.append(p1)
        a, b = p0, p1
        while len(b) > 1:
            r = _prem_positive(a, b)
            if not r:
                break
            r = _primitive([-v for v in r])
            chain.append(r)
            a, b = b, r
    return SturmChain(tuple(IntPoly([int(v) for v in c]) for c in chain))


def count_real_roots(chain, interval):
    """Number of distinct real roots of chain.polys[0] in the interval.

    Endpoint roots need no perturbation: with the square-free evaluation the
    difference V(a) - V(b) counts roots in the half-open (a, b], and the
    closed/open flags are then applied by exact evaluation at the endpoints.
    """
    p = chain.polys[0]
    lo, hi = interval.lo, interval.hi
    count = chain.variations(lo) - chain.variations(hi)
    hi_root = hi != INF and poly_eval(p, hi) == 0
    lo_root = lo != -INF and poly_eval(p, lo) == 0
    if hi_root and interval.hi_open:
        count -= 1
    if lo_root and not interval.lo_open:
        count += 1
    return count


def _sign_variations(c):
    signs = [v > 0 for v in c if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def descartes_bound(p, interval):
    """Upper bound on the number of roots of p in the interval, with multiplicity.

    Maps the open interval onto (0, inf) and counts sign variations; closed
    endpoints that are roots are added on top. Returns None for the whole line.
    """
    if not p:
        raise ZeroPolynomial("Descartes bound of the zero polynomial")
    lo, hi = interval.lo, interval.hi
    if lo == -INF and hi == INF:
        return None
    c = [mpz(v) for v in p.coeffs]
    if hi == INF:
        shifted = _affine(c, Fraction(lo), Fraction(1))  # p(lo + x)
    elif lo == -INF:
        shifted = _affine(_reflect(c), -Fraction(hi), Fraction(1))  # p(hi - x)
    else:
        lo, hi = Fraction(lo), Fraction(hi)
        # p1(y) = p(lo + (hi - lo) y) on (0, 1), then (x + 1)^d p1(1 / (x + 1)) on (0, inf)
        p1 = _affine(c, lo, hi - lo)
        shifted = _taylor_shift(p1[::-1], 1)
    bound = _sign_variations(shifted)
    for x, is_open in ((interval.lo, interval.lo_open), (interval.hi, interval.hi_open)):
        if not is_open and poly_eval(p, x) == 0:
            bound += 1
    return bound


def _reflect(c):
    # p(-x)
    return [v if i % 2 == 0 else -v for i, v in enumerate(c)]


def _affine(c, a, w):
    """Coefficients of a positive multiple of p(a + w y), for rational a and w > 0."""
    D = math.lcm(a.denominator, w.denominator)
    A, W = int(a * D), int(w * D)
    d = len(c) - 1
    # D^d p((A + W y) / D) = g(A + W y) with g(z) = sum c_k D^(d-k) z^k
    g, dp = [], mpz(1)
    for v in reversed(c):
        g.append(v * dp)
        dp *= D
    g.reverse()
    g = _taylor_shift(g, A)
    out, wp = [], mpz(1)
    for v in g:
        out.append(v * wp)
        wp *= W
    return out


class Verdict:
    POSITIVE_STRICT = "PositiveStrict"
    POSITIVE_EXCEPT_ZEROS = "PositiveExceptListedZeros"
    FAILED = "Failed"
    # only from certify_Fn_parity_split: the difference vanishes identically (F_2 is even)
    IDENTICALLY_ZERO = "IdenticallyZero"


@dataclass(frozen=True)
class PositivityCert:
    target: tuple
    interval: Interval
    factored_zeros: tuple  # ((root, multiplicity), ...)
    root_count_interior: int
    endpoint_signs: tuple  # sign of the target at (lo, hi); None at infinity
    verdict: str
    witness: Fraction | None = None
    sample_point: Fraction | None = None
    polynomial: IntPoly | None = field(default=None, repr=False)
    cofactor: IntPoly | None = field(default=None, repr=False)
    notes: tuple = ()

    @property
    def is_positive(self):
        return self.verdict != Verdict.FAILED

    def to_dict(self):
        return {
            "target": [str(x) for x in self.target],
            "interval": self.interval.to_dict(),
            "factored_zeros": [[str(r), k] for r, k in self.factored_zeros],
            "root_count_interior": self.root_count_interior,
            "endpoint_signs": list(self.endpoint_signs),
            "verdict": self.verdict,
            "witness": None if self.witness is None else str(self.witness),
            "sample_point": None if self.sample_point is None else str(self.sample_point),
            "notes": list(self.notes),
        }


def _linear_factor(r):
    r = Fraction(r)
    return IntPoly([-r.numerator, r.denominator])


def root_multiplicity(p, r):
    """Multiplicity of the rational root r of p (0 if not a root)."""
    if not p:
        raise ZeroPolynomial("multiplicity in the zero polynomial")
    lin = _linear_factor(r)
    k = 0
    while poly_eval(p, r) == 0:
        p = poly_divexact(p, lin)
        k += 1
    return k


def _sign(v):
    return (v > 0) - (v < 0)


def _endpoint_sign(p, x):
    if x == INF:
        return _sign(p.lc)
    if x == -INF:
        return _sign(p.lc) * (1 if p.degree % 2 == 0 else -1)
    return _sign(poly_eval(p, x))


def _cauchy_bound(p):
    c = p.coeffs
    return Fraction(max(abs(v) for v in c[:-1]), abs(c[-1])) + 1 if len(c) > 1 else Fraction(1)


def isolate_roots(p, interval, chain=None, max_width=None):
    """Disjoint open rational intervals, each holding exactly one distinct root of p.

    Roots that are themselves bisection points are returned as degenerate
    intervals (r, r).
    """
    chain = chain or sturm_chain(p)
    lo, hi = interval.lo, interval.hi
    bound = _cauchy_bound(chain.polys[0])
    if lo == -INF:
        lo = -bound
    if hi == INF:
        hi = bound
    out = []
    stack = [(Fraction(lo), Fraction(hi))]
    pp = chain.polys[0]
    while stack:
        a, b = stack.pop()
        n = count_real_roots(chain, Interval(a, b))
        if n == 0:
            continue
        if n == 1 and (max_width is None or b - a <= max_width):
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if poly_eval(pp, mid) == 0 and interval.contains(mid):
            out.append((mid, mid))
        stack.append((mid, b))
        stack.append((a, mid))
    out.sort()
    return out


def _find_witness(p, interval, chain):
    """Rational x in the interval with p(x) < 0, else one with p(x) == 0, else None.

    The sign of p is constant between consecutive roots, so it is enough to
    probe both sides of each (refined) isolating interval and the gaps.
    """
    w = Fraction(1, 2**24)
    iso = isolate_roots(p, interval, chain, max_width=w)
    cands = []
    for i, (a, b) in enumerate(iso):
        if a == b:
            # exact root: step off it, staying clear of the neighbouring intervals
            left = a - min(w, (a - iso[i - 1][1]) / 2) if i else a - w
            right = b + min(w, (iso[i + 1][0] - b) / 2) if i + 1 < len(iso) else b + w
            cands += [left, right]
        else:
            cands += [a, b, (3 * a + b) / 4, (a + b) / 2, (a + 3 * b) / 4]
            # a rational root with a small denominator is usually not a dyadic point
            r = ((a + b) / 2).limit_denominator(4096)
            if a < r < b:
                cands.append(r)
    for (_, b1), (a2, _) in zip(iso, iso[1:]):
        cands.append((b1 + a2) / 2)
    cands.append(interval.sample_point())
    zero = None
    for x in cands:
        if not interval.contains(x):
            continue
        v = poly_eval(p, x)
        if v < 0:
            return x
        if v == 0 and zero is None:
            zero = x
    return zero


def certify_positive(p, interval, known_zeros=(), target=("poly",)):
    """Certify p > 0 on the interval, apart from the listed rational zeros.

    Listed zeros are divided out with their multiplicities; one lying strictly
    inside the interval must have even multiplicity. The cofactor must then
    have no root in the interval, and p must be positive at a sample point.
    """
    if not p:
        raise ZeroPolynomial("cannot certify the zero polynomial")
    factored = []
    cof = p
    inside = []
    for r, k in known_zeros:
        r = Fraction(r)
        lin = _linear_factor(r)
        for _ in range(k):
            try:
                cof = poly_divexact(cof, lin)
            except NotDivisible:
                raise NotDivisible(f"listed zero {r} (multiplicity {k}) does not divide the target")
        factored.append((r, k))
        interior = interval.contains(r) and r != interval.lo and r != interval.hi
        if interior and k % 2:
            raise OddMultiplicityZero(f"zero {r} of odd multiplicity {k} inside {interval}")
        if interval.contains(r):
            inside.append(r)
    roots, method = _root_count(cof, interval)
    sample = interval.sample_point(avoid=set(inside))
    sample_val = poly_eval(p, sample)
    ends = (
        None if interval.lo == -INF else _endpoint_sign(p, interval.lo),
        None if interval.hi == INF else _endpoint_sign(p, interval.hi),
    )
    witness = None
    if roots == 0 and sample_val > 0:
        verdict = Verdict.POSITIVE_EXCEPT_ZEROS if inside else Verdict.POSITIVE_STRICT
    else:
        verdict = Verdict.FAILED
        witness = sample if sample_val < 0 else _find_witness(p, interval, sturm_chain(p))
    return PositivityCert(
        target=tuple(target),
        interval=interval,
        factored_zeros=tuple(factored),
        root_count_interior=roots,
        endpoint_signs=ends,
        verdict=verdict,
        witness=witness,
        sample_point=sample,
        polynomial=p,
        cofactor=cof,
        notes=(f"root count by {method}",),
    )


def _root_count(p, interval):
    """(number of distinct roots in the interval, method); a zero Descartes bound settles it."""
    if p.degree > 0 and descartes_bound(p, interval) == 0:
        return 0, "Descartes rule of signs"
    return count_real_roots(sturm_chain(p), interval), "Sturm sequence"


def replay(cert):
    """Re-run the Sturm count on the stored cofactor and re-evaluate the sample."""
    if cert.cofactor is None or cert.polynomial is None:
        return False
    if cert.verdict == Verdict.IDENTICALLY_ZERO:
        return not cert.polynomial
    if cert.verdict == Verdict.FAILED:
        return cert.witness is not None and poly_eval(cert.polynomial, cert.witness) <= 0
    n = count_real_roots(sturm_chain(cert.cofactor), cert.interval)
    return n == 0 and poly_eval(cert.polynomial, cert.sample_point) > 0


def certify_ratfun_positive(f, interval, known_zeros=(), target=("ratfun",)):
    """Certify a rational function positive: denominator first, then numerator.

    The canonical denominator has positive leading coefficient but may still be
    negative on the interval (1 - q^2 is stored as q^2 - 1). It must have no
    root there; its constant sign s is read at a sample point and s * numerator
    is certified. The returned certificate is that of s * numerator.
    """
    den = f.den
    if _root_count(den, interval)[0] != 0:
        return certify_positive(den * den.lc, interval, target=target + ("denominator",))
    s = _sign(poly_eval(den, interval.sample_point()))
    cert = certify_positive(s * f.num, interval, known_zeros, target=target)
    sign = "positive" if s > 0 else "negative"
    return _with_note(cert, f"denominator {sign} and root-free on {interval} (degree {den.degree})")


def _with_note(cert, note):
    return PositivityCert(**{**cert.__dict__, "notes": cert.notes + (note,)})


# the individual claims ------------------------------------------------------------


def certify_convexity(n):
    """C_n''(q) > 0 on the whole real line."""
    from .qcore import qcatalan_poly

    if n < 2:
        raise DomainError("convexity needs n >= 2")
    c2 = poly_derivative(poly_derivative(qcatalan_poly(n)))
    cert = certify_positive(c2, Interval(), target=("Cn_second_derivative", n))
    notes = cert.notes + (f"leading coefficient {c2.lc}", f"value at 0: {poly_eval(c2, 0)}")
    return PositivityCert(**{**cert.__dict__, "notes": notes})


def certify_Fn(n):
    """F_n > 0 on (-1, 1), with the multiplicities of the zeros at +/-1 measured."""
    from .qfuncs import build_Qn

    F = build_Qn(n).Fn
    zeros = []
    for r in (1, -1):
        k = root_multiplicity(F.num, r)
        zeros.append((Fraction(r), k))
    cert = certify_ratfun_positive(F, Interval(-1, 1), zeros, target=("Fn", n))
    # the cofactor keeps one sign on the closed interval too; (q-1)(q+1) < 0 inside
    # makes it negative, so certify it with that sign
    cof = cert.cofactor
    s = _sign(poly_eval(cof, 0)) or 1
    closed = certify_positive(s * cof, Interval.closed(-1, 1), target=("Fn_cofactor", n))
    sign = "positive" if s > 0 else "negative"
    note = f"cofactor {sign} and root-free on [-1, 1]: {closed.is_positive}"
    if not closed.is_positive:
        return PositivityCert(**{**cert.__dict__, "verdict": Verdict.FAILED,
                                 "witness": closed.witness, "notes": cert.notes + (note,)})
    return _with_note(cert, note)


def certify_Fn_parity_split(n):
    """F_n(-t) - F_n(t) > 0 for t in (0, 1), or identically zero."""
    from .qfuncs import build_Qn

    F = build_Qn(n).Fn
    G = RatFun(F.num.scale_arg(-1), F.den.scale_arg(-1)) - F
    if not G:
        iv = Interval(0, 1)
        return PositivityCert(target=("Fn_parity_split", n), interval=iv, factored_zeros=(),
                              root_count_interior=0, endpoint_signs=(0, 0), verdict=Verdict.IDENTICALLY_ZERO,
                              sample_point=iv.sample_point(), polynomial=IntPoly(), cofactor=IntPoly(),
                              notes=("F_n(-t) = F_n(t) identically",))
    k0 = G.num.trailing_zeros()
    return certify_ratfun_positive(G, Interval(0, 1), [(0, k0)] if k0 else [], target=("Fn_parity_split", n))


def certify_Qprime(n):
    """N_n > 0 on (0, 1), hence Q_n' > 0 there."""
    from .qfuncs import build_Qn

    f = build_Qn(n).q2Qnprime
    k0 = f.num.trailing_zeros()
    return certify_ratfun_positive(f, Interval(0, 1), [(0, k0)] if k0 else [], target=("Nn", n))


def certify_Rn(n):
    """Numerators of R_n^(1) and R_n^(2) positive on (0, 1)."""
    from .qfuncs import build_Rn

    r = build_Rn(n)
    return (
        certify_ratfun_positive(r.R1, Interval(0, 1), target=("R1", n)),
        certify_ratfun_positive(r.R2, Interval(0, 1), target=("R2", n)),
    )


def certify_Kn_Ln(n, check=True):
    """K_n (even n) or L_n (odd n) > 0 on (-1, 0), after factoring the zero at q = 0."""
    from .qfuncs import build_Kn, build_Ln

    if n < 2:
        raise DomainError("needs n >= 2")
    if n % 2 == 0:
        f, name = build_Kn(n, check=check), "Kn"
    else:
        if n < 3:
            raise ParityError("L_n needs odd n >= 3")
        f, name = build_Ln(n, check=check), "Ln"
    k0 = f.num.trailing_zeros()
    cert = certify_ratfun_positive(f, Interval(-1, 0), [(0, k0)] if k0 else [], target=(name, n))
    return _with_note(cert, f"order of the zero at q = 0: {k0}")


def certify_decreasing_left(n):
    """-C_n'(q) > 0 on (-inf, -1)."""
    from .qcore import qcatalan_poly

    p = -poly_derivative(qcatalan_poly(n))
    return certify_positive(p, Interval(-INF, -1), target=("minus_Cn_prime", n))


def qbinomial_nonconvexity_witness(n, grid=1024):
    """Rational q in (-1, 0) where the second derivative of [2n choose n]_q is negative.

    Samples the grid k/grid; if no grid point is negative but the second
    derivative has roots in (-1, 0), a point between two roots is tried.
    Returns None when no witness exists or none is found.
    """
    from .qcore import q_binomial

    if n < 2:
        raise DomainError("needs n >= 2")
    d2 = poly_derivative(poly_derivative(q_binomial(2 * n, n)))
    best = None
    for k in range(1, grid):
        x = Fraction(-k, grid)
        v = poly_eval(d2, x)
        if v < 0 and (best is None or v < best[1]):
            best = (x, v)
    if best is not None:
        return best[0]
    chain = sturm_chain(d2)
    iv = Interval(-1, 0)
    if count_real_roots(chain, iv) == 0:
        return None
    w = _find_witness(d2, iv, chain)
    if w is not None and poly_eval(d2, w) < 0:
        return w
    return None
