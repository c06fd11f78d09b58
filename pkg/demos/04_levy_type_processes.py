"""State-dependent processes: variable order, bounded kernels, and SDEs.

For processes whose jump structure depends on the current position, the
upper-function question is answered from extrema of the symbol and the jump
tail over shrinking state balls.  The symbol route needs no side conditions;
the lower route detects blow-up of t * inf-ball symbol size.
"""

from levyup import (
    check_A1,
    classify_levy,
    classify_ltp_lower,
    classify_ltp_upper,
    power,
    sector_check,
    symbol_extremum,
)
from levyup import processes as pr

print("=" * 64)
print("Process of variable order: q(z, xi) = |xi|^{order(z)}")
print("=" * 64)
vo = pr.variable_order_process()  # order(z) = 1.5 - 0.4 clamp(z, -1, 1)
print("order extrema over the ball |z| <= 0.5 at frequency radius 4:")
print(f"  sup-sup |q| = {symbol_extremum(vo, 0.0, 0.5, 4.0, 'sup_sup'):.4f}"
      f"  (= 4^1.7)")
print(f"  inf-sup |q| = {symbol_extremum(vo, 0.0, 0.5, 4.0, 'inf_sup'):.4f}"
      f"  (= 4^1.3)")
print(f"  ball balance: {check_A1(vo, x=0.0, ball_radius=0.5).verdict}")
for kappa, direction in ((0.6, "upper"), (0.8, "lower")):
    if direction == "upper":
        res = classify_ltp_upper(vo, 0.0, power(kappa))
    else:
        res = classify_ltp_lower(vo, 0.0, power(kappa))
    print(f"  f = t^{kappa}: {direction} route -> {res.outcome} ({res.reason})")

print()
print("=" * 64)
print("Bounded stable-type kernel")
print("=" * 64)
st = pr.stable_type_process(1.5)
print(f"  sector: {sector_check(st, x_ball=(0.0, 0.5)).verdict}")
res = classify_ltp_upper(st, 0.0, power(1 / 1.5 - 0.05))
print(f"  f = t^(1/1.5 - 0.05) -> {res.outcome} ({res.reason})")

print()
print("=" * 64)
print("SDE driven by a Cauchy process, bounded coefficient")
print("=" * 64)
sde = pr.sde_process()
res_x = classify_ltp_upper(sde, 0.0, power(0.8))
res_l = classify_levy(pr.cauchy_process(), power(0.8))
print(f"  solution:  f = t^0.8 -> {res_x.outcome}")
print(f"  driver:    f = t^0.8 -> {res_l.outcome}")
