"""
Sector-based stability classification
=====================================

The origin of D^alpha x = A x + f(x) (Caputo, 1 < alpha < 2) is
asymptotically stable when every eigenvalue of A satisfies
|arg lambda| > alpha*pi/2.  The sector is open: eigenvalues on the rim get
an honest "inconclusive" rather than a guess, and eigenvalues outside only
mean the criterion does not apply (no instability converse is claimed).
"""

import numpy as np

from fracstab import FractionalOrder, classify

CASES = [
    ("negative reals", np.diag([-1.0, -2.0])),
    ("complex pair -1 +/- i (on the rim for alpha=1.5)", [[0.0, 1.0], [-2.0, -2.0]]),
    ("one positive eigenvalue", np.diag([1.0, -1.0])),
    ("jordan block at -1", [[-1.0, 1.0], [0.0, -1.0]]),
    ("zero eigenvalue", np.diag([0.0, -1.0])),
]

for alpha in (1.25, 1.5, 1.75):
    order = FractionalOrder(alpha)
    print(f"\nalpha = {alpha}  (sector half-angle {order.sector_half_angle:.4f} rad)")
    for name, A in CASES:
        rep = classify(A, order)
        margins = ", ".join(
            f"{v.eigenvalue:.3g}: {v.margin:+.3f} ({v.verdict})"
            for v in rep.per_eigenvalue
        )
        print(f"  {name:50s} -> {rep.overall:22s} [{margins}]")

# The same complex pair flips from boundary to strictly inside once alpha
# drops below 1.5, because the sector widens as alpha decreases.
print("\nmargin of -1+i as alpha varies:")
from fracstab import sector_test

for alpha in (1.1, 1.3, 1.5, 1.7, 1.9):
    margin, verdict = sector_test(-1 + 1j, FractionalOrder(alpha))
    print(f"  alpha={alpha}: margin={margin:+.4f} rad -> {verdict}")
