import numpy as np
import pytest
from scipy import stats

from levyup import processes as pr
from levyup.errors import RateOverflow
from levyup.simulate import (
    SimConfig,
    estimate_exit_survival,
    mc_event_probability,
    path_rng,
    proportion_estimate,
    sample_increment,
    simulate_batch,
    simulate_path,
    stable_draws,
    verify_bound_table,
)

GRID_01 = np.linspace(0.0, 0.1, 101)


class TestIncrements:
    def test_cauchy_unit_median(self):
        # |standard Cauchy| has median tan(pi/4) = 1
        d = stable_draws(path_rng(7, 0), 1.0, 200_000)
        assert np.median(np.abs(d)) == pytest.approx(1.0, rel=0.03)

    def test_symmetry_of_draws(self):
        d = stable_draws(path_rng(8, 0), 1.5, 100_000)
        assert np.mean(d > 0) == pytest.approx(0.5, abs=0.01)

    def test_stable_law_matches_scipy(self):
        d = stable_draws(path_rng(9, 0), 1.5, 30_000)
        # scipy's standard parametrization at beta=0 matches exponent |xi|^1.5
        ks = stats.kstest(d, stats.levy_stable(alpha=1.5, beta=0.0).cdf)
        assert ks.pvalue > 0.01

    def test_small_jump_surrogate_variance(self):
        # variance of the Gaussian surrogate is dt * trunc2(delta) = 0.4 dt;
        # dt small enough that steps containing a jump (rate 0.0013) are rare
        # and clearly separated from the 8-sigma Gaussian bulk
        raw = pr.raw_stable_process(1.5)
        assert float(raw.levy.measure.trunc2(0.01)) == pytest.approx(0.4)
        rng = path_rng(10, 0)
        dt = 1e-6
        incs = np.array([
            sample_increment(raw.levy, dt, 0.01, rng) for _ in range(4000)
        ])
        small = incs[np.abs(incs) < 0.005]
        assert small.var() == pytest.approx(0.4 * dt, rel=0.1)

    def test_symmetric_increment_mean_zero(self):
        rng = path_rng(11, 0)
        incs = np.array([
            sample_increment(pr.cauchy_process().levy, 1e-3, 0.05, rng)
            for _ in range(2000)
        ])
        med = np.median(incs)
        assert abs(med) < 0.005

    def test_rate_overflow(self):
        raw = pr.raw_stable_process(1.0)
        with pytest.raises(RateOverflow):
            sample_increment(raw.levy, 10_000.0, 1e-4, path_rng(0, 0))


class TestPaths:
    def test_zero_process_constant(self):
        sample = simulate_path(pr.zero_process(), 0.7, 1.0, SimConfig(n_paths=1))
        assert np.all(sample.values == 0.7)
        assert np.all(sample.runmax == 0.0)

    def test_path_sample_invariants(self):
        sample = simulate_path(pr.cauchy_process(), 0.0, 0.5,
                               SimConfig(n_paths=1, seed=3))
        assert sample.times[0] == 0.0
        assert sample.values[0] == 0.0
        assert np.all(np.diff(sample.times) > 0)
        assert np.all(np.diff(sample.runmax) >= 0)
        # runmax dominates the endpoint deviation at every index
        assert np.all(sample.runmax >= np.abs(sample.values - 0.0) - 1e-12)

    def test_reproducibility_bit_identical(self):
        cfg = SimConfig(n_paths=8, seed=123)
        v1, r1 = simulate_batch(pr.cauchy_process(), 0.0, GRID_01, cfg)
        v2, r2 = simulate_batch(pr.cauchy_process(), 0.0, GRID_01, cfg)
        assert np.array_equal(v1, v2) and np.array_equal(r1, r2)

    def test_chunking_matches_unchunked(self):
        from levyup.simulate import _batched_runmax

        cfg = SimConfig(n_paths=7, seed=5)
        _, r1 = _batched_runmax(pr.cauchy_process(), 0.0, GRID_01, cfg, chunk=3)
        _, r2 = simulate_batch(pr.cauchy_process(), 0.0, GRID_01, cfg)
        assert np.array_equal(r1, r2)

    def test_endpoint_law_cauchy(self):
        # P(|X_1| > 1) = 1/2 for the standard Cauchy law at t = 1
        est = mc_event_probability(pr.cauchy_process(), 0.0,
                                   ("abs_at_least", 1.0, 1.0),
                                   SimConfig(dt=1e-3, n_paths=4000, seed=11))
        assert abs(est.p_hat - 0.5) <= max(est.ci_half_width, 0.025)

    def test_cpg_vs_exact_same_law(self):
        # compound-Poisson + Gaussian surrogate approximates the exact law
        cfg_e = SimConfig(dt=1e-3, n_paths=1500, seed=21, scheme="exact_stable")
        cfg_c = SimConfig(dt=1e-3, n_paths=1500, seed=22,
                          scheme="compound_poisson_gauss")
        spec = pr.cauchy_process()
        v1, _ = simulate_batch(spec, 0.0, GRID_01, cfg_e)
        v2, _ = simulate_batch(spec, 0.0, GRID_01, cfg_c)
        ks = stats.ks_2samp(v1[:, -1], v2[:, -1])
        assert ks.pvalue > 0.01

    def test_sign_flip_symmetry(self):
        spec = pr.stable_process(1.3)
        v1, _ = simulate_batch(spec, 0.0, GRID_01, SimConfig(n_paths=1500, seed=31))
        v2, _ = simulate_batch(spec, 0.0, GRID_01, SimConfig(n_paths=1500, seed=32))
        ks = stats.ks_2samp(v1[:, -1], -v2[:, -1])
        assert ks.pvalue > 0.01

    def test_halving_dt_stays_within_ci(self):
        spec = pr.cauchy_process()
        e1 = mc_event_probability(spec, 0.0, ("abs_at_least", 0.1, 0.5),
                                  SimConfig(dt=1e-3, n_paths=4000, seed=41))
        e2 = mc_event_probability(spec, 0.0, ("abs_at_least", 0.1, 0.5),
                                  SimConfig(dt=5e-4, n_paths=4000, seed=41))
        assert abs(e1.p_hat - e2.p_hat) <= e1.ci_half_width + e2.ci_half_width

    def test_freeze_symbol_reduces_to_levy(self):
        # constant order: frozen increments have exactly the stable law
        const_order = pr.variable_order_process(order_fn=lambda z: 1.2 * np.ones_like(np.asarray(z, float)))
        times = np.linspace(0.0, 0.2, 201)
        v1, _ = simulate_batch(const_order, 0.0, times, SimConfig(n_paths=1200, seed=51))
        v2, _ = simulate_batch(pr.stable_process(1.2), 0.0, times,
                               SimConfig(n_paths=1200, seed=52))
        ks = stats.ks_2samp(v1[:, -1], v2[:, -1])
        assert ks.pvalue > 0.01

    def test_sde_with_unit_coefficient_matches_driver(self):
        sde = pr.sde_process(coefficient=lambda z: np.ones_like(np.asarray(z, float)))
        times = np.linspace(0.0, 0.2, 201)
        v1, _ = simulate_batch(sde, 0.0, times, SimConfig(n_paths=1200, seed=61))
        v2, _ = simulate_batch(pr.cauchy_process(), 0.0, times,
                               SimConfig(n_paths=1200, seed=62))
        ks = stats.ks_2samp(v1[:, -1], v2[:, -1])
        assert ks.pvalue > 0.01

    def test_slow_variation_cpg_runs(self):
        spec = pr.slow_variation_process()
        cfg = SimConfig(dt=1e-4, n_paths=50, seed=71)
        times = np.linspace(0.0, 0.01, 101)
        values, runmax = simulate_batch(spec, 0.0, times, cfg)
        assert np.all(np.isfinite(values))
        assert np.all(np.diff(runmax, axis=1) >= 0)


class TestEstimators:
    def test_survival_at_zero_is_one(self):
        ests = estimate_exit_survival(pr.cauchy_process(), 0.0, 0.5, [0.0, 0.05],
                                      SimConfig(n_paths=400, seed=81))
        assert ests[0].p_hat == 1.0 and ests[0].ci_half_width == 0.0

    def test_survival_monotone_in_t(self):
        ests = estimate_exit_survival(pr.cauchy_process(), 0.0, 0.5,
                                      [0.02, 0.05, 0.1],
                                      SimConfig(n_paths=800, seed=82))
        vals = [e.p_hat for e in ests]
        assert vals == sorted(vals, reverse=True)

    def test_survival_respects_bound(self):
        spec = pr.raw_stable_process(1.0)
        est = estimate_exit_survival(spec, 0.0, 0.5, [0.1],
                                     SimConfig(n_paths=3000, seed=83))[0]
        bound = 1.0 / (1.0 + 0.1 * 2.0)  # G(1) = 2
        assert est.p_hat <= bound + 3 * est.ci_half_width

    def test_runmax_dominates_endpoint_probability(self):
        spec = pr.cauchy_process()
        cfg = SimConfig(n_paths=1500, seed=84)
        a = mc_event_probability(spec, 0.0, ("runmax_at_least", 0.1, 0.5), cfg)
        b = mc_event_probability(spec, 0.0, ("abs_at_least", 0.1, 0.5), cfg)
        assert a.p_hat >= b.p_hat

    def test_wilson_fallback_for_rare_events(self):
        est = proportion_estimate(1, 50)
        assert est.ci_half_width > 0
        assert est.lower >= 0.0 and est.upper <= 1.0


class TestBoundTables:
    GRID = [(t, r) for t in (0.02, 0.1) for r in (0.25, 0.5)]

    def test_exit_survival_zero_violations(self):
        rows = verify_bound_table(pr.raw_stable_process(1.0), 0.0,
                                  "exit_survival", self.GRID,
                                  SimConfig(n_paths=2000, seed=91))
        assert rows and not any(r.violated for r in rows)

    def test_expected_exit_zero_violations(self):
        rows = verify_bound_table(pr.raw_stable_process(1.0), 0.0,
                                  "expected_exit", self.GRID,
                                  SimConfig(n_paths=1000, seed=92))
        assert rows and not any(r.violated for r in rows)

    def test_lower_bound_zero_violations(self):
        rows = verify_bound_table(pr.raw_stable_process(1.0), 0.0, "lower_max",
                                  self.GRID, SimConfig(n_paths=2000, seed=93))
        assert not any(r.violated for r in rows)

    def test_max_ineq_reports_with_standin(self):
        rows = verify_bound_table(pr.raw_stable_process(1.0), 0.0, "max_ineq",
                                  self.GRID, SimConfig(n_paths=500, seed=94),
                                  c_standin=1.0)
        assert len(rows) == len(self.GRID)

    def test_etemadi_comparison(self):
        spec = pr.raw_stable_process(1.0)
        cfg = SimConfig(n_paths=2000, seed=95)
        for t, r in [(0.05, 0.25), (0.1, 0.5)]:
            a = mc_event_probability(spec, 0.0, ("runmax_at_least", t, 3 * r), cfg)
            b = mc_event_probability(spec, 0.0, ("abs_at_least", t, r), cfg)
            assert a.p_hat <= 3 * b.p_hat + 3 * b.ci_half_width
