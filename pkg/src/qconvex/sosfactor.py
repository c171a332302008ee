"""Numerical A^2 + (1 - q^2) B^2 decomposition of the numerators N_n.

Recipe: put q = cos(t) and z = e^{it}. A polynomial p >= 0 on [-1, 1] becomes
|h(z)|^2 for a real polynomial h built from one root of each {zeta, 1/conj(zeta)}
orbit of the lifted polynomial G. Writing e^{-ist} h(e^{it}) = A(cos t) + i sin(t) B(cos t)
gives p = A^2 + (1 - q^2) B^2 on [-1, 1], hence as polynomials.

A and B are kept as Chebyshev series. Their monomial coefficients grow like
2^deg while their values stay of the size of sqrt(N_n), so float64 monomial
coefficients would lose every digit by n = 7.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import mpmath
import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import ConvergenceFailure, DomainError, PairingAmbiguity, ResidualTooLarge, ZeroPolynomial
from .exactpoly import IntPoly, poly_divexact, poly_eval

__all__ = [
    "FloatPoly",
    "SosDecomposition",
    "cosine_lift",
    "numeric_roots",
    "decompose",
    "build_AB",
]

GRID_POINTS = 4096
_DPS = 60


@dataclass(frozen=True)
class FloatPoly:
    """Real polynomial with float64 coefficients, in the monomial or Chebyshev-T basis."""

    coeffs: tuple
    basis: str = "monomial"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if not np.all(np.isfinite(c)):
            raise DomainError("FloatPoly coefficients must be finite")
        c = np.trim_zeros(c, "b")
        object.__setattr__(self, "coeffs", tuple(float(x) for x in c))
        if self.basis not in ("monomial", "chebyshev"):
            raise DomainError(f"unknown basis {self.basis!r}")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        if not self.coeffs:
            return np.zeros_like(np.asarray(x, dtype=float))
        if self.basis == "chebyshev":
            return C.chebval(x, self.coeffs)
        return np.polynomial.polynomial.polyval(x, self.coeffs)

    def to_monomial(self):
        if self.basis == "monomial":
            return self
        return FloatPoly(tuple(C.cheb2poly(self.coeffs)) if self.coeffs else (), "monomial")


@dataclass(frozen=True)
class SosDecomposition:
    n: int
    A: FloatPoly
    B: FloatPoly
    grid_residual_sup: float
    root_pairing_log: list = field(default_factory=list)


def cosine_lift(p):
    """G(z) = (2z)^d p((z + 1/z)/2); integer coefficients, palindromic of degree 2d."""
    if not p:
        raise ZeroPolynomial("lift of the zero polynomial")
    d = p.degree
    out = [0] * (2 * d + 1)
    # (2z)^d ((z+1/z)/2)^k = 2^{d-k} z^{d-k} (z^2 + 1)^k
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        scale = c << (d - k)
        for i in range(k + 1):
            out[d - k + 2 * i] += scale * comb(k, i)
    return IntPoly(out)


def _polish(coeffs_mp, x0, tol):
    x = mpmath.mpc(x0)
    for _ in range(100):
        v, dv = mpmath.polyval(coeffs_mp, x, derivative=True)
        if dv == 0:
            break
        step = v / dv
        x -= step
        if abs(step) <= tol * (1 + abs(x)):
            break
    return x


def _mp_roots(p):
    """Roots of an integer polynomial at _DPS digits: numpy seeds, Newton polish, mpmath fallback."""
    d = p.degree
    if d < 1:
        return []
    high_first = [int(c) for c in reversed(p.coeffs)]
    with mpmath.workdps(_DPS):
        cm = [mpmath.mpf(c) for c in high_first]
        eps = mpmath.mpf(10) ** (-(_DPS - 10))
        seeds = np.roots(np.array(high_first, dtype=float))
        roots = [_polish(cm, complex(r), eps) for r in seeds]
        # Newton from float seeds can merge two roots; check and fall back
        ok = len(roots) == d
        if ok:
            srt = sorted(roots, key=lambda z: (float(z.real), float(z.imag)))
            sep = min((abs(a - b) for a, b in zip(srt, srt[1:])), default=mpmath.mpf(1))
            ok = sep > mpmath.mpf(10) ** (-(_DPS // 3))
        if not ok:
            roots = list(mpmath.polyroots(cm, maxsteps=400, extraprec=4 * _DPS))
        return roots


def _relative_residual(coeffs_mp, norm, r):
    return float(abs(mpmath.polyval(coeffs_mp, r)) / norm)


def numeric_roots(G, tol=1e-12):
    """All complex roots of G (with multiplicity) as Python complex numbers.

    Each root satisfies |G(root)| / ||G||_inf <= tol, evaluated at high precision.
    """
    if not G:
        raise ZeroPolynomial("roots of the zero polynomial")
    k0 = G.trailing_zeros()
    core = IntPoly(G.coeffs[k0:])
    roots = [mpmath.mpc(0)] * k0 + _mp_roots(core)
    with mpmath.workdps(_DPS):
        cm = [mpmath.mpf(int(c)) for c in reversed(G.coeffs)]
        norm = max(abs(mpmath.mpf(int(c))) for c in G.coeffs)
        worst = max((_relative_residual(cm, norm, r) for r in roots), default=0.0)
    if worst > tol:
        raise ConvergenceFailure(worst)
    return [complex(r) for r in roots]


def _strip_root(p, r):
    lin = IntPoly([-r, 1])
    k = 0
    while p.degree > 0 and poly_eval(p, r) == 0:
        p = poly_divexact(p, lin)
        k += 1
    return p, k


def _inside_root(r):
    """The root of z^2 - 2 r z + 1 in the closed unit disk."""
    s = mpmath.sqrt(r * r - 1)
    z1, z2 = r + s, r - s
    return z1 if abs(z1) <= abs(z2) else z2


def _h_roots(M, tol):
    """One root per {zeta, 1/conj zeta} orbit of the lift of M, plus the pairing log.

    The lift factors as lc * prod_i (z^2 - 2 r_i z + 1) over the roots r_i of M,
    so its orbits come straight from the roots of M: r outside [-1, 1] gives
    one root inside the disk; a root of M inside (-1, 1) must be double, and
    the pair contributes e^{+ia} and e^{-ia} once each.
    """
    log = []
    zetas = []
    for r0, name in ((1, "unit-circle (z = 1)"), (-1, "unit-circle (z = -1)")):
        M, k = _strip_root(M, r0)
        zetas += [mpmath.mpc(r0)] * k
        log += [(complex(r0), name)] * k
    roots = _mp_roots(M)
    inner, outer = [], []
    for r in roots:
        if abs(r.imag) < tol and -1 < r.real < 1:
            inner.append(r)
        else:
            outer.append(r)
    for r in outer:
        z = _inside_root(r)
        zetas.append(z)
        log.append((complex(z), "1/conj" if abs(abs(z) - 1) > tol else "unit-circle"))
    inner.sort(key=lambda x: x.real)
    if len(inner) % 2:
        raise PairingAmbiguity(f"odd number ({len(inner)}) of real roots inside (-1, 1)")
    for a, b in zip(inner[::2], inner[1::2]):
        if abs(a - b) > 10 * mpmath.sqrt(tol):
            raise PairingAmbiguity(f"real roots {complex(a)} and {complex(b)} do not pair up")
        r = ((a + b) / 2).real
        w = mpmath.sqrt(1 - r * r)
        for z in (mpmath.mpc(r, w), mpmath.mpc(r, -w)):
            zetas.append(z)
            log.append((complex(z), "unit-circle"))
    return zetas, log, M


def _chebyshev_parts(h):
    """A, B with e^{-ist} h(e^{it}) = A(cos t) + i sin(t) B(cos t), s = floor(deg h / 2)."""
    d = len(h) - 1
    s = d // 2
    a = np.zeros(max(s, d - s) + 1)
    b = np.zeros(max(s, d - s) + 1)
    for k, hk in enumerate(h):
        j = k - s
        a[abs(j)] += hk
        if j:
            # sgn(j) h_k U_{|j|-1}, with U_m = 2 (T_m + T_{m-2} + ...) - [m even] T_0
            m = abs(j) - 1
            sg = 1.0 if j > 0 else -1.0
            for i in range(m, -1, -2):
                b[i] += sg * hk * (1.0 if i == 0 else 2.0)
    return a, b


def _grid_residual(N, A, B, points=GRID_POINTS):
    xs = np.linspace(-1.0, 1.0, points)
    worst = 0.0
    av, bv = A(xs), B(xs)
    for x, a, b in zip(xs, av, bv):
        nv = float(poly_eval(N, Fraction(x)))
        r = abs(nv - (a * a + (1 - x * x) * b * b)) / (1 + abs(nv))
        worst = max(worst, r)
    return worst


def decompose(N, tol=1e-8, n=None):
    """A, B with N = A^2 + (1 - q^2) B^2 for an integer polynomial N >= 0 on [-1, 1]."""
    if not N:
        raise ZeroPolynomial("cannot decompose the zero polynomial")
    t = N.trailing_zeros()
    if t % 2:
        raise DomainError(f"zero of odd order {t} at q = 0; N changes sign on [-1, 1]")
    M = IntPoly(N.coeffs[t:])
    if M.lc < 0 and M.degree == 0:
        raise DomainError("negative constant")
    lift = cosine_lift(M)
    if not lift.is_palindromic():
        raise DomainError("lift is not self-inversive")
    with mpmath.workdps(_DPS):
        zetas, log, _ = _h_roots(M, tol=1e-20)
        # |M(cos t)| = |lc| prod |z - zeta|^2 / (2^d prod |zeta|) on |z| = 1
        d = M.degree
        prod_abs = mpmath.mpf(1)
        for z in zetas:
            prod_abs *= abs(z)
        kappa = mpmath.sqrt(abs(mpmath.mpf(int(M.lc))) / (mpmath.mpf(2) ** d * prod_abs))
        h = [mpmath.mpc(1)]
        for z in zetas:
            nxt = [mpmath.mpc(0)] * (len(h) + 1)
            for i, c in enumerate(h):
                nxt[i + 1] += c
                nxt[i] -= z * c
            h = nxt
        imag = max((abs(c.imag) for c in h), default=0) * kappa
        h = [float((c * kappa).real) for c in h]
    if imag > tol:
        raise PairingAmbiguity(f"h is not real (imaginary part {float(imag):.2e})")
    a, b = _chebyshev_parts(h)
    # reattach q^{t/2}
    for _ in range(t // 2):
        a = C.chebmulx(a)
        b = C.chebmulx(b)
    A, B = FloatPoly(tuple(a), "chebyshev"), FloatPoly(tuple(b), "chebyshev")
    res = _grid_residual(N, A, B)
    if res > tol:
        raise ResidualTooLarge(res)
    return SosDecomposition(n=n, A=A, B=B, grid_residual_sup=res, root_pairing_log=log)


def build_AB(n, tol=1e-8):
    """Decomposition of the numerator N_n of q^2 Q_n'."""
    from .qfuncs import build_Qn

    if n < 2:
        raise DomainError("N_n needs n >= 2")
    return decompose(build_Qn(n).Nn_num, tol=tol, n=n)
