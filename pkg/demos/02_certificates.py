# %% exact positivity certificates
from fractions import Fraction

from qconvex.certify import (
    Interval,
    certify_convexity,
    certify_Fn,
    certify_Kn_Ln,
    certify_positive,
    qbinomial_nonconvexity_witness,
    replay,
)
from qconvex.exactpoly import IntPoly

q = IntPoly([0, 1])

# %% the generic engine: positive, positive apart from listed zeros, failed with a witness
print(certify_positive(q * q + 1, Interval()).verdict)
print(certify_positive(2 * q * q * (1 - q * q), Interval(-1, 1), [(0, 2)]).verdict)
bad = certify_positive(q**3 - q, Interval(0, 2))
print(bad.verdict, "witness", bad.witness)

# %% convexity of C_n on the whole line; replay re-runs the Sturm count
for n in (5, 10, 15):
    c = certify_convexity(n)
    print(n, c.verdict, "replay", replay(c))

# %% F_n on (-1, 1) with its zeros at +-1 measured
c = certify_Fn(6)
print(c.verdict, c.factored_zeros, c.notes)

# %% K_n (even n) and L_n (odd n) on (-1, 0)
for n in range(2, 12):
    c = certify_Kn_Ln(n)
    print(n, c.target[0], c.verdict)

# %% central q-binomials are not convex: a rational point with negative second derivative
w = qbinomial_nonconvexity_witness(3)
print("witness for [6 choose 3]_q:", w, "=", float(w) if w is not None else None)
print(Fraction(-1023, 1024) == w)
