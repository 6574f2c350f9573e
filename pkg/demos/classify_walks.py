"""
Phase verdicts for drifting walks
=================================

A walk on the nonnegative half-line gets a mean inward/outward push of
rho * x^alpha / t^beta at position x and time t.  Whether it escapes
(transient) or keeps coming back (recurrent) depends almost entirely on
where (alpha, beta) sits; rho only matters on the critical line
alpha = beta = 1.  `classify` gives the verdict with the rule that decided
it, and `region_grid` evaluates a whole rectangle of exponent pairs.
"""

from driftlab.phase import classify, region_grid

# --- single points ---------------------------------------------------------
# On the critical line the strength rho decides: above 1/2 escapes, below
# 1/2 returns.  Off the line the exponents alone decide.
cases = [
    (0.7, 1.0, 1.0),    # strong drift on the critical line
    (0.3, 1.0, 1.0),    # weak drift on the critical line
    (1.0, 0.2, 0.5),    # inside the transient wedge
    (1.0, -0.5, 0.25),  # on the open line 2*beta - alpha = 1
    (1.0, 0.0, 0.5),    # the law-of-iterated-logarithm point
    (0.5, 2.0, 1.5),    # alpha > beta: prohibited
]
for rho, alpha, beta in cases:
    label = classify(rho, alpha, beta)
    print(f"rho={rho:4.1f} alpha={alpha:5.2f} beta={beta:4.2f}  ->  "
          f"{label.verdict:16s} ({label.justification})")

# --- a coarse phase diagram ------------------------------------------------
# One character per cell: T transient, R recurrent, ? open problem,
# = boundary, x prohibited.  Rows print beta descending so the picture has
# beta increasing upward, like a plot.
marks = {"Transient": "T", "Recurrent": "R", "OpenProblem": "?",
         "CriticalBoundary": "=", "Invalid": "x"}
alphas, betas, labels = region_grid((-1.0, 1.0), (0.0, 1.0), 21, 1.0)
print("\nbeta")
for i in reversed(range(len(betas))):
    row = "".join(marks[lab.verdict] for lab in labels[i])
    print(f"{betas[i]:4.2f} {row}")
print("     " + "".join("^" if abs(a) < 1e-9 else " " for a in alphas))
print("     alpha from -1 to 1 (caret at 0)")
