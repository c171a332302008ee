# %% N_n = A^2 + (1 - q^2) B^2 on [-1, 1], numerically
import numpy as np

from qconvex.exactpoly import poly_eval
from qconvex.qfuncs import build_Qn
from qconvex.sosfactor import build_AB, cosine_lift

N2 = build_Qn(2).Nn_num
print("N_2 =", N2)
print("lift of N_2:", cosine_lift(N2))

d = build_AB(2)
print("A =", d.A.to_monomial().coeffs, " B =", d.B.to_monomial().coeffs)

# %% larger n: A and B are kept in the Chebyshev basis
for n in range(3, 9):
    d = build_AB(n)
    print(n, "deg A", d.A.degree, "deg B", d.B.degree, "residual %.2e" % d.grid_residual_sup)

# %% spot check at a few points
N = build_Qn(8).Nn_num
for x in np.linspace(-0.9, 0.9, 5):
    lhs = float(poly_eval(N, float(x)))
    rhs = d.A(x) ** 2 + (1 - x * x) * d.B(x) ** 2
    print("%.2f  %.6e  %.6e" % (x, lhs, rhs))
