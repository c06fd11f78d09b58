"""Which growth functions dominate the small-time paths of a stable process?

For a symmetric stable process of index a, the function t^kappa is an upper
function exactly when kappa < 1/a: the normalized deviation sup|X_s|/f(t)
collapses to zero, and for kappa > 1/a it blows up.  The classifier decides
this from the jump-tail integral alone, after verifying the sector condition
and the small-jump/tail balance.
"""

import numpy as np

from levyup import classify_levy, classify_power, power, sqrt_t
from levyup import processes as pr

print("=" * 64)
print("Stable processes: the power-function dichotomy")
print("=" * 64)

for alpha in (0.5, 1.0, 1.5):
    spec = pr.raw_stable_process(alpha)
    print(f"\nindex a = {alpha}  (threshold 1/a = {1/alpha:.3f})")
    for kappa in np.round([1 / alpha - 0.3, 1 / alpha - 0.1,
                           1 / alpha + 0.1, 1 / alpha + 0.3], 3):
        res = classify_levy(spec, power(float(kappa)))
        used = "+".join(res.assumptions_used)
        print(f"  f(t) = t^{kappa:<6} ->  {res.outcome:<13} (via {used})")

print("\n" + "=" * 64)
print("Power shortcut: moment test and the t^(1/2) boundary")
print("=" * 64)

spec = pr.raw_stable_process(1.5)
for kappa in (0.3, 0.5, 0.6, 0.8):
    res = classify_power(spec, kappa)
    print(f"  kappa = {kappa:<4} ->  {res.outcome}")

print("\n" + "=" * 64)
print("An honest boundary case")
print("=" * 64)
print("""
The measure with slowly varying truncated second moment sits exactly on the
t^(1/2) boundary: the normalized deviation settles near a finite constant,
so neither the zero nor the infinity verdict is true.  Both side conditions
fail, and the classifier refuses to guess:
""")
sv = pr.slow_variation_process()
res = classify_levy(sv, sqrt_t())
print(f"  f(t) = sqrt(t) ->  {res.outcome}  ({res.reason})")
