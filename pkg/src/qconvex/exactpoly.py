"""Exact univariate polynomials and rational functions over the integers.

Polynomials are dense coefficient tuples, lowest degree first, with the zero
polynomial stored as the empty tuple. Rational scalars are
:class:`fractions.Fraction`. Every value is immutable.

Large products go through Kronecker substitution (pack into one big integer,
multiply, unpack), which lets CPython's Karatsuba do the work. GCDs try the
heuristic evaluation/interpolation GCD first and fall back to a primitive
pseudo-remainder sequence.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .errors import (
    DegreeBoundTooSmall,
    NotDivisible,
    NotIntegral,
    ZeroDenominator,
)

__all__ = [
    "IntPoly",
    "RatFun",
    "poly_mul",
    "poly_derivative",
    "poly_divexact",
    "poly_eval",
    "poly_reversal",
    "poly_shift_basis",
    "expand_shift_basis",
    "poly_gcd",
    "pseudo_remainder",
    "ratfun_reduce",
    "ratfun_derivative",
    "ratfun_eval",
    "one_minus_qk",
]

_KRONECKER_MIN = 900  # len(a) * len(b) above which packing beats schoolbook


def _strip(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


class IntPoly:
    """Dense polynomial with integer coefficients; ``coeffs[i]`` multiplies q**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        if isinstance(coeffs, IntPoly):
            coeffs = coeffs.coeffs
        elif isinstance(coeffs, int):
            coeffs = (coeffs,)
        c = []
        for v in coeffs:
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise NotIntegral(f"non-integer coefficient {v}")
                v = v.numerator
            elif not isinstance(v, int):
                iv = int(v)
                if iv != v:
                    raise NotIntegral(f"non-integer coefficient {v}")
                v = iv
            c.append(int(v))
        object.__setattr__(self, "coeffs", _strip(c))

    @classmethod
    def _raw(cls, coeffs):
        # coeffs already a stripped tuple of ints
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", coeffs)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def monomial(cls, k, c=1):
        if not c:
            return cls._raw(())
        return cls._raw((0,) * k + (int(c),))

    @classmethod
    def constant(cls, c):
        return cls._raw((int(c),) if c else ())

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "q" if i == 1 else f"q^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s

    # arithmetic -----------------------------------------------------------

    def __neg__(self):
        return IntPoly._raw(tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, v in enumerate(b):
            c[i] += v
        return IntPoly._raw(_strip(c))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return IntPoly._raw(())
            return IntPoly._raw(tuple(c * other for c in self.coeffs))
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = IntPoly._raw((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __floordiv__(self, other):
        """Exact division; raises unless ``other`` divides ``self`` in Z[q]."""
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return poly_divexact(self, other)

    def __call__(self, x):
        return poly_eval(self, x)

    # structure ------------------------------------------------------------

    def shift(self, k):
        """Multiply by q**k."""
        if not self.coeffs or k == 0:
            return self
        return IntPoly._raw((0,) * k + self.coeffs)

    def derivative(self):
        return poly_derivative(self)

    def content(self):
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self):
        """Divide by the content; the sign of the leading coefficient is kept."""
        g = self.content()
        if g <= 1:
            return self
        return IntPoly._raw(tuple(c // g for c in self.coeffs))

    def monic_sign(self):
        """Primitive part normalised to a positive leading coefficient."""
        p = self.primitive()
        return -p if p.lc < 0 else p

    def reversal(self, d=None):
        return poly_reversal(self, self.degree if d is None else d)

    def scale_arg(self, c):
        """p(c*q) for an integer c."""
        out, pw = [], 1
        for v in self.coeffs:
            out.append(v * pw)
            pw *= c
        return IntPoly._raw(_strip(out))

    def trailing_zeros(self):
        """Multiplicity of the root q = 0."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def is_palindromic(self):
        return self.coeffs == self.coeffs[::-1]

    def compose(self, other):
        """self(other(q))."""
        other = _as_poly(other)
        result = IntPoly._raw(())
        for c in reversed(self.coeffs):
            result = result * other + c
        return result


def _as_poly(x):
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly._raw((x,) if x else ())
    return NotImplemented


def one_minus_qk(k, sign=-1):
    """1 - q**k, or 1 + q**k with ``sign=+1``."""
    if k == 0:
        return IntPoly.constant(1 + sign)
    c = [0] * (k + 1)
    c[0] = 1
    c[k] = sign
    return IntPoly._raw(tuple(c))


# multiplication --------------------------------------------------------------


def _schoolbook(a, b):
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] += ai * bj
    return res


def _pack(coeffs, nbytes):
    return int.from_bytes(
        b"".join(c.to_bytes(nbytes, "little") for c in coeffs), "little"
    )


def _pack_signed(coeffs, nbytes):
    pos = _pack([c if c > 0 else 0 for c in coeffs], nbytes)
    neg = _pack([-c if c < 0 else 0 for c in coeffs], nbytes)
    return pos - neg


def _kronecker(a, b):
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    n = len(a) + len(b) - 1
    half = 1 << (8 * nbytes - 1)
    prod = _pack_signed(a, nbytes) * _pack_signed(b, nbytes)
    offset = _pack([half] * n, nbytes)
    raw = (prod + offset).to_bytes(n * nbytes, "little")
    return [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(n)
    ]


def poly_mul(a, b):
    """Product of two polynomials."""
    a, b = _as_poly(a), _as_poly(b)
    if not a.coeffs or not b.coeffs:
        return IntPoly._raw(())
    ca, cb = a.coeffs, b.coeffs
    if len(ca) * len(cb) < _KRONECKER_MIN:
        return IntPoly._raw(_strip(_schoolbook(ca, cb)))
    # sparse factors such as 1 - q^k are cheaper by direct accumulation
    if len(ca) < len(cb):
        ca, cb = cb, ca
    nz = sum(1 for c in cb if c)
    if nz <= 4:
        res = [0] * (len(ca) + len(cb) - 1)
        for j, bj in enumerate(cb):
            if bj:
                for i, ai in enumerate(ca):
                    res[i + j] += ai * bj
        return IntPoly._raw(_strip(res))
    return IntPoly._raw(_strip(_kronecker(ca, cb)))


def poly_derivative(p):
    c = p.coeffs
    return IntPoly._raw(tuple(i * c[i] for i in range(1, len(c))))


# division ----------------------------------------------------------------------


def _divexact_int(a, b):
    """Quotient list if b | a with integral steps, else None."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return None if any(a) else []
    rem = list(a)
    lc = b[-1]
    nz = [(i, c) for i, c in enumerate(b[:-1]) if c]
    quot = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        t = rem[k + db]
        if not t:
            continue
        qk, r = divmod(t, lc)
        if r:
            return None
        quot[k] = qk
        for i, c in nz:
            rem[k + i] -= qk * c
    if any(rem[:db]):
        return None
    return quot


def _divmod_rational(a, b):
    da, db = len(a) - 1, len(b) - 1
    rem = [Fraction(v) for v in a]
    lc = b[-1]
    if da < db:
        return [], rem
    quot = [Fraction(0)] * (da - db + 1)
    for k in range(da - db, -1, -1):
        t = rem[k + db]
        if not t:
            continue
        qk = t / lc
        quot[k] = qk
        for i in range(db + 1):
            if b[i]:
                rem[k + i] -= qk * b[i]
    return quot, rem[:db]


def poly_divexact(a, b):
    """Quotient a / b, required to be exact with integer coefficients.

    Raises NotDivisible when the remainder over the rationals is nonzero and
    NotIntegral when it is zero but the quotient has a non-integer coefficient.
    """
    a, b = _as_poly(a), _as_poly(b)
    if not b.coeffs:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a.coeffs:
        return a
    q = _divexact_int(a.coeffs, b.coeffs)
    if q is not None:
        return IntPoly._raw(_strip(q))
    quot, rem = _divmod_rational(a.coeffs, b.coeffs)
    if any(rem):
        raise NotDivisible(f"{b} does not divide {a}")
    raise NotIntegral(f"quotient {a} / {b} has non-integer coefficients")


def pseudo_remainder(a, b, positive=True):
    """Remainder of m*a by b for some integer m != 0.

    With ``positive`` the multiplier m is positive, so the result has the sign
    of the true remainder; this is what Sturm sequences need.
    """
    if not b.coeffs:
        raise ZeroDivisionError("pseudo-remainder by the zero polynomial")
    r = list(a.coeffs)
    bc = b.coeffs
    db = len(bc) - 1
    lcb = bc[-1]
    sgn = 1 if (lcb > 0 or not positive) else -1
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        lr = r[-1]
        g = math.gcd(lr, lcb)
        mr = abs(lcb) // g if positive else lcb // g
        mb = sgn * lr // g if positive else lr // g
        if mr != 1:
            r = [v * mr for v in r]
        for i in range(db + 1):
            if bc[i]:
                r[k + i] -= mb * bc[i]
        r.pop()
        while r and not r[-1]:
            r.pop()
    return IntPoly._raw(tuple(r))


# evaluation and change of basis ----------------------------------------------------


def poly_eval(p, x):
    """Exact value p(x) at an integer or rational x (Fraction result)."""
    c = p.coeffs
    if not c:
        return Fraction(0)
    if isinstance(x, int):
        acc = 0
        for v in reversed(c):
            acc = acc * x + v
        return Fraction(acc)
    if not isinstance(x, Rational):
        # floats and complex numbers: plain Horner
        acc = 0
        for v in reversed(c):
            acc = acc * x + v
        return acc
    x = Fraction(x)
    a, b = x.numerator, x.denominator
    acc, bp = c[-1], 1
    for v in reversed(c[:-1]):
        bp *= b
        acc = acc * a + v * bp
    return Fraction(acc, bp)


def poly_reversal(p, d):
    """q**d * p(1/q); requires d >= deg p."""
    if d < p.degree:
        raise DegreeBoundTooSmall(f"bound {d} below degree {p.degree}")
    if not p.coeffs:
        return p
    c = p.coeffs + (0,) * (d - p.degree)
    return IntPoly._raw(_strip(c[::-1]))


def _taylor_shift(c, s):
    a = list(c)
    d = len(a) - 1
    if s == 1:
        for i in range(d):
            for j in range(d - 1, i - 1, -1):
                a[j] += a[j + 1]
    elif s:
        for i in range(d):
            for j in range(d - 1, i - 1, -1):
                a[j] += s * a[j + 1]
    return a


def poly_shift_basis(p, c):
    """Coefficients u with p(t) = sum u[j] (t - c)**j, by repeated synthetic division."""
    c = Fraction(c)
    if not p.coeffs:
        return []
    if c.denominator == 1:
        return [Fraction(v) for v in _taylor_shift(p.coeffs, c.numerator)]
    return _taylor_shift([Fraction(v) for v in p.coeffs], c)


def expand_shift_basis(u, c):
    """Inverse of poly_shift_basis: power-basis coefficients (Fractions)."""
    return _taylor_shift([Fraction(v) for v in u], -Fraction(c))


# gcd -------------------------------------------------------------------------------


def _eval_int(c, x):
    acc = 0
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _interpolate(h, x):
    out = []
    half = x // 2
    while h:
        r = h % x
        if r > half:
            r -= x
        out.append(r)
        h = (h - r) // x
    return IntPoly._raw(_strip(out))


def _heu_gcd(f, g):
    fc, gc = f.coeffs, g.coeffs
    fn, gn = max(map(abs, fc)), max(map(abs, gc))
    b = 2 * min(fn, gn) + 29
    x = max(min(b, 99 * math.isqrt(b)), 2 * min(fn // abs(fc[-1]), gn // abs(gc[-1])) + 2)
    for _ in range(6):
        ff, gg = _eval_int(fc, x), _eval_int(gc, x)
        if ff and gg:
            h = math.gcd(ff, gg)
            hp = _interpolate(h, x).primitive()
            if hp.coeffs and _divexact_int(fc, hp.coeffs) is not None and _divexact_int(gc, hp.coeffs) is not None:
                return hp
            for cof, this, other in ((ff // h, fc, gc), (gg // h, gc, fc)):
                cp = _interpolate(cof, x)
                if not cp.coeffs:
                    continue
                q = _divexact_int(this, cp.coeffs)
                if q is not None:
                    hp = IntPoly._raw(_strip(q)).primitive()
                    if hp.coeffs and _divexact_int(other, hp.coeffs) is not None:
                        return hp
        x = 73794 * x * math.isqrt(math.isqrt(x)) // 27011
    return None


def _prs_gcd(f, g):
    a, b = f, g
    if a.degree < b.degree:
        a, b = b, a
    while b.coeffs:
        a, b = b, pseudo_remainder(a, b, positive=False).primitive()
    return a.primitive()


def poly_gcd(a, b):
    """Greatest common divisor, primitive with positive leading coefficient."""
    a, b = _as_poly(a), _as_poly(b)
    if not a.coeffs:
        return b.monic_sign()
    if not b.coeffs:
        return a.monic_sign()
    fa, fb = a.primitive(), b.primitive()
    if fa.degree == 0 or fb.degree == 0:
        return IntPoly._raw((1,))
    # shared power of q
    z = min(fa.trailing_zeros(), fb.trailing_zeros())
    if z:
        fa = IntPoly._raw(fa.coeffs[z:])
        fb = IntPoly._raw(fb.coeffs[z:])
    if fa.degree == 0 or fb.degree == 0:
        g = IntPoly._raw((1,))
    else:
        g = _heu_gcd(fa, fb)
        if g is None:
            g = _prs_gcd(fa, fb)
    return g.monic_sign().shift(z)


# rational functions ------------------------------------------------------------------


class RatFun:
    """Quotient num/den in canonical form.

    Canonical form: gcd(num, den) = 1 over the rationals, the integer contents
    of num and den share no factor, and den has positive leading coefficient.
    Two equal functions therefore have identical (num, den).
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = _as_poly(num), _as_poly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RatFun expects IntPoly or int arguments")
        n, d = _canonical(num, den)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    @classmethod
    def _raw(cls, num, den):
        f = object.__new__(cls)
        object.__setattr__(f, "num", num)
        object.__setattr__(f, "den", den)
        return f

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    def __repr__(self):
        return f"RatFun({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __eq__(self, other):
        if isinstance(other, (int, IntPoly)):
            other = RatFun(other)
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash(("RatFun", self.num.coeffs, self.den.coeffs))

    def __bool__(self):
        return bool(self.num)

    @property
    def is_polynomial(self):
        return self.den.degree == 0 and self.den.lc == 1

    def __neg__(self):
        return RatFun._raw(-self.num, self.den)

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a:
            return other
        if not c:
            return self
        g = poly_gcd(b, d)
        if g.degree == 0:
            return RatFun._canon_coprime(a * d + c * b, b * d)
        b1, d1 = b // g, d // g
        t = a * d1 + c * b1
        if not t:
            return RatFun._raw(IntPoly(), IntPoly(1))
        g2 = poly_gcd(t, g)
        if g2.degree > 0:
            t = t // g2
            den = b1 * (d // g2)
        else:
            den = b1 * d
        return RatFun._canon_coprime(t, den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a or not c:
            return RatFun._raw(IntPoly(), IntPoly(1))
        g1, g2 = poly_gcd(a, d), poly_gcd(c, b)
        if g1.degree > 0:
            a, d = a // g1, d // g1
        if g2.degree > 0:
            c, b = c // g2, b // g2
        return RatFun._canon_coprime(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDenominator("division by the zero rational function")
        return self * RatFun._canon_coprime(other.den, other.num)

    def __rtruediv__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (RatFun(1) / self) ** (-k)
        return RatFun._canon_coprime(self.num ** k, self.den ** k)

    def __call__(self, x):
        return ratfun_eval(self, x)

    def derivative(self):
        return ratfun_derivative(self)

    def reciprocal_substitution(self, sign=1):
        """f(sign/q) as a canonical rational function (sign is +1 or -1)."""
        d = max(self.num.degree, self.den.degree, 0)
        n, m = self.num, self.den
        if sign == -1:
            n, m = n.scale_arg(-1), m.scale_arg(-1)
        return RatFun(poly_reversal(n, d), poly_reversal(m, d))

    @classmethod
    def _canon_coprime(cls, num, den):
        # num, den already coprime as polynomials; fix contents and sign
        if not num.coeffs:
            return cls._raw(num, IntPoly._raw((1,)))
        g = math.gcd(num.content(), den.content())
        if g > 1:
            num = IntPoly._raw(tuple(c // g for c in num.coeffs))
            den = IntPoly._raw(tuple(c // g for c in den.coeffs))
        if den.lc < 0:
            num, den = -num, -den
        return cls._raw(num, den)


def _as_ratfun(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, (int, IntPoly)):
        return RatFun._raw(_as_poly(x), IntPoly._raw((1,)))
    return NotImplemented


def _canonical(num, den):
    if not den.coeffs:
        raise ZeroDenominator("zero denominator")
    if not num.coeffs:
        return num, IntPoly._raw((1,))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    f = RatFun._canon_coprime(num, den)
    return f.num, f.den


def ratfun_reduce(num, den):
    """Canonical RatFun equal to num/den."""
    return RatFun(num, den)


def ratfun_derivative(f):
    """Quotient-rule derivative in canonical form."""
    n, d = f.num, f.den
    if d.degree == 0:
        return RatFun._canon_coprime(poly_derivative(n), d)
    # d/dq (n/d) = (n' d - n d') / d^2; with g = gcd(d, d') the common factor
    # g cancels from numerator and d^2 down to d * (d/g)
    dp = poly_derivative(d)
    g = poly_gcd(d, dp)
    dg = d // g
    top = poly_derivative(n) * dg - n * (dp // g)
    return RatFun(top, d * dg)


def ratfun_eval(f, x):
    """Exact value; raises ZeroDenominator at a pole of the canonical form."""
    den = poly_eval(f.den, x)
    if not den:
        raise ZeroDenominator(f"pole at {x}")
    return poly_eval(f.num, x) / den
