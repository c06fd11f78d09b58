"""Watching the small-time dichotomy happen, one dyadic level at a time.

M_n is the running maximum at time 2^{-n}, normalized by f(2^{-n}).  Under an
upper function the medians collapse geometrically as n grows; past the
threshold they explode.  On the boundary measure they sit still near a
constant, which is exactly the behaviour the analytic machinery refuses to
classify.
"""

from levyup import SimConfig, dyadic_limsup_stats, power, sqrt_t, trend_classify
from levyup import processes as pr

config = SimConfig(n_paths=500, seed=1)


def show(title, spec, f, n_min=4, n_max=16):
    stats = dyadic_limsup_stats(spec, 0.0, f, n_min, n_max, config)
    verdict = trend_classify(stats)
    print(f"\n{title}")
    print(f"  {'n':>3} {'t_n':>12} {'q10':>9} {'median':>9} {'q90':>9}")
    for n, t_n, q10, med, q90 in stats.rows():
        print(f"  {n:>3} {t_n:>12.3e} {q10:>9.4f} {med:>9.4f} {q90:>9.4f}")
    print(f"  trend: {verdict.label}  (slope {verdict.slope:+.3f} per level, "
          f"end/start ratio {verdict.ratio:.3g})")
    return verdict


show("Cauchy process, f(t) = t^0.8  (upper function)",
     pr.cauchy_process(), power(0.8))
show("Cauchy process, f(t) = t^1.25  (not an upper function)",
     pr.cauchy_process(), power(1.25))
show("slowly varying boundary measure, f(t) = sqrt(t)  (constant band)",
     pr.slow_variation_process(), sqrt_t())
