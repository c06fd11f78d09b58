"""Empirical small-time growth studies on dyadic grids.

The observable is M_n = sup_{s <= 2^{-n}} |X_s - x| / f(2^{-n}).  A limsup is
not observable in finite simulation; the surrogate is the trend of the median
of M_n across levels: geometric decay, geometric growth, a flat band, or too
noisy to call.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .criteria import Classification, classify_levy, classify_ltp_upper, classify_power
from .growth import power, sqrt_t
from .simulate import SimConfig, _batched_runmax
from .symbols import ProcessSpec

SLOPE_THRESHOLD = 0.05   # per level, in log2 of the median
RATIO_THRESHOLD = 4.0    # total end-to-start median ratio
NOISE_DECADES = 3.0      # q90/q10 span at the last level that voids a verdict
POINTS_PER_LEVEL = 256   # grid resolution inside each dyadic block


@dataclass
class DyadicStats:
    levels: np.ndarray        # n = n_min..n_max
    t_values: np.ndarray      # 2^{-n}
    q10: np.ndarray
    median: np.ndarray
    q90: np.ndarray
    mean_log: np.ndarray      # mean of log M_n (paths with M_n > 0)
    n_paths: int = 0

    def rows(self):
        return [
            (int(n), float(t), float(a), float(b), float(c))
            for n, t, a, b, c in zip(self.levels, self.t_values, self.q10,
                                     self.median, self.q90)
        ]


@dataclass
class TrendVerdict:
    label: str   # "tends_zero" | "grows" | "flat" | "noisy"
    slope: float
    ratio: float


def dyadic_time_grid(n_min, n_max, points_per_level=POINTS_PER_LEVEL):
    """Refined grid on [0, 2^{-n_min}]: each dyadic block gets its own
    uniform subdivision, plus an equally fine bottom block below 2^{-(n_max+1)}."""
    pieces = [np.array([0.0]),
              np.linspace(0.0, 2.0 ** -(n_max + 1), points_per_level + 1)[1:]]
    for n in range(n_max, n_min - 1, -1):
        lo, hi = 2.0 ** -(n + 1), 2.0**-n
        pieces.append(np.linspace(lo, hi, points_per_level + 1)[1:])
    return np.concatenate(pieces)


def dyadic_limsup_stats(spec: ProcessSpec, x, f, n_min=4, n_max=16,
                        config: SimConfig | None = None,
                        normalize_by="growth"):
    """Quantiles of M_n over simulated paths for n = n_min..n_max.

    ``f`` is a GrowthFunction; with normalize_by="self" the per-path realized
    supremum at each level is its own normalizer (M_n is then identically 1
    wherever the path has moved).
    """
    if n_max > 20:
        raise ValueError("n_max above 20 is not supported (grid would be huge)")
    if n_max - n_min < 2:
        raise ValueError("need at least three levels")
    config = config or SimConfig(n_paths=500, seed=0)
    times = dyadic_time_grid(n_min, n_max)
    _, runmax = _batched_runmax(spec, x, times, config)
    levels = np.arange(n_min, n_max + 1)
    t_vals = 2.0 ** -levels.astype(float)
    idx = np.searchsorted(times, t_vals + 1e-18) - 1
    sup_vals = runmax[:, idx]  # (paths, levels)
    if normalize_by == "self":
        with np.errstate(invalid="ignore", divide="ignore"):
            m = np.where(sup_vals > 0, sup_vals / np.where(sup_vals > 0, sup_vals, 1.0), 0.0)
    else:
        m = sup_vals / np.asarray(f(t_vals), float)[None, :]
    q10, med, q90 = np.quantile(m, [0.10, 0.50, 0.90], axis=0)
    mean_log = np.array([
        np.log(col[col > 0]).mean() if np.any(col > 0) else -np.inf
        for col in m.T
    ])
    return DyadicStats(levels=levels, t_values=t_vals, q10=q10, median=med,
                       q90=q90, mean_log=mean_log, n_paths=config.n_paths)


def trend_classify(stats: DyadicStats):
    """Label the level-trend of the median of M_n.

    Least-squares slope of log2(median) against n over the last two thirds of
    the levels; geometric separation thresholds as module constants.  The
    verdict is noisy when the q10..q90 band spans more than three decades at
    the deepest level.
    """
    if len(stats.levels) < 6:
        raise ValueError("need at least six levels to classify a trend")
    med = np.asarray(stats.median, float)
    if np.all(med == 0.0):
        return TrendVerdict("tends_zero", -np.inf, 0.0)
    with np.errstate(divide="ignore"):
        band = stats.q90[-1] / np.where(stats.q10[-1] > 0, stats.q10[-1], np.nan)
    if not np.isfinite(band) or band > 10.0**NOISE_DECADES:
        return TrendVerdict("noisy", np.nan,
                            float(med[-1] / med[0]) if med[0] > 0 else np.nan)
    start = len(med) // 3
    n_fit = stats.levels[start:]
    m_fit = np.maximum(med[start:], 1e-300)
    slope = float(np.polyfit(n_fit, np.log2(m_fit), 1)[0])
    ratio = float(med[-1] / med[0]) if med[0] > 0 else np.inf
    if slope < -SLOPE_THRESHOLD and ratio < 1.0 / RATIO_THRESHOLD:
        return TrendVerdict("tends_zero", slope, ratio)
    if slope > SLOPE_THRESHOLD and ratio > RATIO_THRESHOLD:
        return TrendVerdict("grows", slope, ratio)
    return TrendVerdict("flat", slope, ratio)


# ---------------------------------------------------------------------------
# worked examples: analytic + empirical, with an agreement flag
# ---------------------------------------------------------------------------


@dataclass
class ExampleReport:
    name: str
    analytic: dict            # label -> Classification
    empirical: dict           # label -> TrendVerdict
    stats: dict = field(default_factory=dict)
    agree: bool = True

    def rows(self):
        out = []
        for key in self.analytic:
            emp = self.empirical.get(key)
            out.append((self.name, key, self.analytic[key].outcome,
                        emp.label if emp else "", self.agree))
        return out


_COMPATIBLE = {
    "zero": {"tends_zero"},
    "infinity": {"grows"},
    "lower_bound": {"grows", "flat"},
    "indeterminate": {"flat", "noisy", "tends_zero", "grows"},
}


def _agrees(analytic: Classification, trend: TrendVerdict):
    return trend.label in _COMPATIBLE[analytic.outcome]


def reproduce_example(name, n_paths=500, n_min=4, n_max=16, seed=0):
    """Run one named study end to end: the analytic classification and the
    matching dyadic simulation, with a flag recording whether they agree."""
    from . import processes as pr

    config = SimConfig(n_paths=n_paths, seed=seed)
    analytic, empirical, stats = {}, {}, {}

    if name == "StableDichotomy":
        spec = pr.cauchy_process()
        for kappa in (0.8, 1.25):
            key = f"kappa={kappa:g}"
            f = power(kappa)
            analytic[key] = classify_levy(spec, f)
            st = dyadic_limsup_stats(spec, 0.0, f, n_min, n_max, config)
            stats[key] = st
            empirical[key] = trend_classify(st)
    elif name == "SlowVariation":
        spec = pr.slow_variation_process()
        f = sqrt_t()
        analytic["sqrt"] = classify_levy(spec, f)
        st = dyadic_limsup_stats(spec, 0.0, f, n_min, n_max, config)
        stats["sqrt"] = st
        empirical["sqrt"] = trend_classify(st)
    elif name == "VariableOrder":
        # the medians separate like 2^{-n(1/order - kappa)} per level, so the
        # empirical study needs a wide exponent gap; the narrow-gap exponent
        # is still classified analytically
        spec = pr.variable_order_process()
        analytic["kappa=0.6"] = classify_ltp_upper(spec, 0.0, power(0.6))
        f = power(0.45)
        analytic["kappa=0.45"] = classify_ltp_upper(spec, 0.0, f)
        st = dyadic_limsup_stats(spec, 0.0, f, n_min, n_max, config)
        stats["kappa=0.45"] = st
        empirical["kappa=0.45"] = trend_classify(st)
    elif name == "StableType":
        alpha = 1.5
        spec = pr.stable_type_process(alpha)
        analytic["pinned"] = classify_ltp_upper(spec, 0.0,
                                                power(1.0 / alpha - 0.05))
        f = power(0.45)
        analytic["kappa=0.45"] = classify_ltp_upper(spec, 0.0, f)
        st = dyadic_limsup_stats(spec, 0.0, f, n_min, n_max, config)
        stats["kappa=0.45"] = st
        empirical["kappa=0.45"] = trend_classify(st)
    elif name == "SdeCauchy":
        spec = pr.sde_process()
        f = power(0.8)
        analytic["sde"] = classify_ltp_upper(spec, 0.0, f)
        analytic["driver"] = classify_levy(pr.cauchy_process(), f)
        st = dyadic_limsup_stats(spec, 0.0, f, n_min, n_max, config)
        stats["sde"] = st
        empirical["sde"] = trend_classify(st)
        std = dyadic_limsup_stats(pr.cauchy_process(), 0.0, f, n_min, n_max,
                                  config)
        stats["driver"] = std
        empirical["driver"] = trend_classify(std)
    elif name == "SqrtTLaw":
        spec = pr.cauchy_process()
        f = sqrt_t()
        analytic["power=1/2"] = classify_power(spec, 0.5)
        st = dyadic_limsup_stats(spec, 0.0, f, n_min, n_max, config)
        stats["power=1/2"] = st
        empirical["power=1/2"] = trend_classify(st)
    else:
        raise ValueError(f"unknown example {name!r}")

    agree = all(
        _agrees(analytic[k], empirical[k]) for k in analytic if k in empirical
    )
    return ExampleReport(name=name, analytic=analytic, empirical=empirical,
                         stats=stats, agree=agree)


EXAMPLE_NAMES = ("StableDichotomy", "SlowVariation", "VariableOrder",
                 "StableType", "SdeCauchy", "SqrtTLaw")


# ---------------------------------------------------------------------------
# numeric series bound used by the level-subsampling argument
# ---------------------------------------------------------------------------


def series_bound_max(t_grid=None, n_terms=10_000, chunk=200):
    """max over t of sum_{n<=N} n^{-2} t^{1/n} log(1/t); bounded by 2."""
    if t_grid is None:
        t_grid = np.concatenate([
            np.logspace(-6, -1, 600),
            np.linspace(0.1, 0.999, 1400),
        ])
    n = np.arange(1, n_terms + 1, dtype=float)
    best = 0.0
    for i in range(0, len(t_grid), chunk):
        t = t_grid[i:i + chunk]
        log_t = np.log(t)
        vals = np.exp(log_t[None, :] / n[:, None]) * (-log_t)[None, :] / n[:, None] ** 2
        best = max(best, float(vals.sum(axis=0).max()))
    return best
