# %% numerical evidence for the two open problems, and figure data
from fractions import Fraction

from qconvex.cli import emit_figure_data, problem_E_scan, problem_W_scan

rep = problem_W_scan(5, grid_size=64)
for e in rep["verdicts"]:
    print("W", e["n"], e["verdict"], e["detail"]["certificate"])

rep = problem_E_scan([Fraction(3, 2), Fraction(2), Fraction(10)])
for e in rep["verdicts"]:
    d = e["detail"]
    print("E t=%s" % d["t"], e["verdict"], "second summand peaks near", d["second_summand_local_max"])

# %% two-column CSV, printed here
emit_figure_data("F4-curve", 11)
