# %% q-Catalan polynomials: construction, oracle, special values
from qconvex.exactpoly import poly_derivative
from qconvex.qcore import central_parity, qcatalan, qcatalan_dyck_oracle, special_values

# C_n(q) from the product formula; the record checks degree, palindromy, C_n(1)
rec = qcatalan(4)
print("C_4 =", rec.poly)
print("degree", rec.degree, "palindromic", rec.palindromic, "C_4(1) =", rec.catalan_at_1)

# %% the same polynomial by summing q^maj over Dyck words
print("maj enumeration agrees:", qcatalan_dyck_oracle(4) == rec.poly)

# %% values of C, C', C'' at 0, 1, -1 (raises if a closed form disagrees)
sv = special_values(6)
print("C_6''(-1) =", sv.Csecond_at_minus1, " C_6'(1) =", sv.Cprime_at_1)
print("C_4'' =", poly_derivative(poly_derivative(rec.poly)))

# %% the central coefficient is odd exactly when n + 1 is a power of two
for n in range(2, 17):
    r = central_parity(n)
    print(n, "odd" if r.central_coeff_odd else "even", "nu(Catalan) =", r.nu_catalan)
