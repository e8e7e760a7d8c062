"""
Why exponential Mittag-Leffler bounds fail for 1 < alpha < 2
============================================================

Several published stability proofs lean on bounds of the form
|E_{alpha,beta}(-lambda t^alpha)| <= K exp(-lambda t).  The tail is actually
algebraic: |E| * t^p settles at a positive constant (p = alpha for beta in
{1, 2}; p = 2 alpha for beta = alpha, whose leading tail coefficient
1/Gamma(0) vanishes).  So |E| > N/t^p eventually, and the would-be
exponential majorant is crossed and left behind by orders of magnitude.
"""

import numpy as np

from fracstab import audit

rep = audit(alpha=1.5, lam=1.0, t_max=1e3)

print("alpha = 1.5, lambda = 1; analytic limits of |E| * t^p:")
print("  beta=1:    1/(2 sqrt(pi)) = 0.282095")
print("  beta=3/2:  3/(4 sqrt(pi)) = 0.423142")
print("  beta=2:    1/sqrt(pi)     = 0.564190")

print("\nmeasured:")
for case in rep.beta_cases:
    settled = case.abs_ml[-1] * case.times[-1] ** case.p
    print(
        f"  beta={case.beta:4g}: |E| t^{case.p:g} -> {settled:.6f}; "
        f"lower bound N={case.N:.4f} holds from t={case.t_star:.2f}; "
        f"|E| > exp(-t) from t={case.t_cross:.2f}"
    )

case = rep.beta_cases[0]
print("\nmargin |E| / exp(-t) for beta=1:")
for target in (10.0, 20.0, 40.0, 100.0):
    i = int(np.argmin(np.abs(case.times - target)))
    t = case.times[i]
    print(f"  t={t:6.1f}: |E|={case.abs_ml[i]:.3e}  exp(-t)={case.comparator[i]:.3e}  "
          f"ratio={case.abs_ml[i] / max(case.comparator[i], 1e-300):.3e}")

print("\nany bound |E| <= K exp(-lambda t) is therefore false for large t;")
print("stability arguments built on it do not stand.")

# margin curves for external plotting
for label, case in zip(("beta1", "beta_alpha", "beta2"), rep.beta_cases):
    case.write_csv(f"margin_{label}.csv")
print("wrote margin_beta1.csv, margin_beta_alpha.csv, margin_beta2.csv")
