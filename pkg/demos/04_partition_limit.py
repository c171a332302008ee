# %% the limit F(q) = prod_{k>=2} 1/(1 - q^k) and partition numbers
from fractions import Fraction

from qconvex.partitions import F_derivatives_at, F_series, convergence_probe, log_growth_ratios, partition_numbers

p = partition_numbers(20)
print("P(0..20):", p)
print("F series:", F_series(20).coeffs)

# %% F'' at rational points, with the truncation tail bounded exactly
for x in (Fraction(-9, 10), Fraction(0), Fraction(1, 2), Fraction(9, 10)):
    d = F_derivatives_at(x)
    print(x, "kmax", d.kmax, "F'' = %.6g" % float(d.Fsecond), "tail <= %.1e" % float(d.tail_bound))

# %% C_n'' approaches F'' as n grows
grid = [Fraction(k, 10) for k in range(-9, 10)]
for n, err in convergence_probe(grid, (4, 6, 8, 10, 12)):
    print(n, "%.10g" % err)

# %% log P(n) / n
r = log_growth_ratios(60)
print(["%.4f" % v for v in r[:10]], "...", "%.4f" % r[-1])
