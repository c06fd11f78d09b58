import numpy as np
import pytest

from levyup import growth as gr
from levyup import processes as pr
from levyup.criteria import (
    CriteriaSettings,
    bg_index,
    check_A1,
    check_A2,
    check_C1,
    check_C2,
    classify_levy,
    classify_ltp_lower,
    classify_ltp_upper,
    classify_power,
    dyadic_integral,
    exit_bounds,
    fit_symbol_growth,
    symbol_integral_criterion,
    tail_integral_criterion,
)
from levyup.errors import EvaluationFailure


class TestDyadicIntegral:
    def test_inverse_sqrt_converges_to_two(self):
        v = dyadic_integral(lambda t: t**-0.5)
        assert v.converges
        assert v.value == pytest.approx(2.0, abs=1e-6)

    def test_harmonic_diverges_with_constant_blocks(self):
        v = dyadic_integral(lambda t: 1.0 / t)
        assert v.diverges
        assert np.allclose(v.block_sums, np.log(2.0))

    def test_log_squared_weight_converges_near_one(self):
        # antiderivative of 1/(t log^2(e/t)) is 1/log(e/t); the full integral is 1
        v = dyadic_integral(lambda t: 1.0 / (t * np.log(np.e / t) ** 2))
        assert v.converges
        assert v.value == pytest.approx(1.0, abs=0.03)
        # partial sums telescope exactly against the antiderivative
        n = v.n_max
        partial_exact = 1.0 - 1.0 / (1.0 + (n + 1) * np.log(2.0))
        assert float(v.block_sums.sum()) == pytest.approx(partial_exact, abs=1e-9)

    def test_growing_integrand_diverges(self):
        v = dyadic_integral(lambda t: t**-1.3)
        assert v.diverges

    def test_constant_integrand_value_exact(self):
        v = dyadic_integral(lambda t: np.full_like(np.asarray(t, float), 3.0))
        assert v.converges
        assert v.value == pytest.approx(3.0, rel=1e-12)

    def test_all_zero_blocks(self):
        v = dyadic_integral(lambda t: np.zeros_like(np.asarray(t, float)))
        assert v.converges and v.value == 0.0

    def test_min_depth_rejected(self):
        with pytest.raises(ValueError):
            dyadic_integral(lambda t: t, n_max=4)

    def test_raising_integrand_maps_to_evaluation_failure(self):
        def bad(t):
            raise RuntimeError("boom")

        with pytest.raises(EvaluationFailure):
            dyadic_integral(bad)


class TestTailIntegralCriterion:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_stable_dichotomy_around_reciprocal_index(self, alpha):
        spec = pr.raw_stable_process(alpha)
        assert tail_integral_criterion(spec, None, gr.power(1 / alpha - 0.2), 1.0).converges
        assert tail_integral_criterion(spec, None, gr.power(1 / alpha + 0.2), 1.0).diverges

    def test_constant_growth_value(self):
        spec = pr.cauchy_process()
        v = tail_integral_criterion(spec, None, gr.constant(1.0), 2.0)
        assert v.converges
        # integrand is the constant G(2) = 1/pi
        assert v.value == pytest.approx(float(spec.levy.measure.tail(2.0)), rel=1e-10)

    def test_scale_coherence_in_c(self):
        spec = pr.raw_stable_process(1.5)
        f = gr.power(0.5)
        v1 = tail_integral_criterion(spec, None, f, 1.0)
        v2 = tail_integral_criterion(spec, None, f, 2.0)
        assert v1.converges and v2.converges

    def test_state_dependent_sup_vs_inf(self):
        spec = pr.stable_type_process(1.2)
        f = gr.power(0.5)
        v_sup = tail_integral_criterion(spec, 0.0, f, 1.0, ball_mode="sup")
        v_inf = tail_integral_criterion(spec, 0.0, f, 1.0, ball_mode="inf")
        assert v_sup.converges and v_inf.converges

    @pytest.mark.parametrize("mode", ["sup", "inf"])
    @pytest.mark.parametrize("shift", [-0.1, 0.1])
    def test_stable_type_matches_constant_kernel(self, mode, shift):
        # bounded kernel: verdict identical to the constant-intensity case
        alpha = 1.2
        spec = pr.stable_type_process(alpha)
        f = gr.power(1 / alpha + shift)
        v = tail_integral_criterion(spec, 0.0, f, 1.0, ball_mode=mode)
        ref = tail_integral_criterion(pr.stable_process(alpha), None, f, 1.0)
        assert v.state == ref.state

    def test_ball_mode_contract(self):
        with pytest.raises(ValueError):
            tail_integral_criterion(pr.cauchy_process(), None, gr.power(0.8), 1.0,
                                    ball_mode="sup")
        with pytest.raises(ValueError):
            tail_integral_criterion(pr.variable_order_process(), 0.0,
                                    gr.power(0.8), 1.0, ball_mode=None)


class TestSymbolIntegralCriterion:
    def test_cauchy_power_integral_value(self):
        v = symbol_integral_criterion(pr.cauchy_process(), 0.0, gr.power(0.8))
        assert v.converges
        assert v.value == pytest.approx(5.0, abs=1e-5)

    def test_cauchy_divergent(self):
        v = symbol_integral_criterion(pr.cauchy_process(), 0.0, gr.power(1.2))
        assert v.diverges

    @pytest.mark.parametrize("kappa", [0.5, 0.9, 1.1, 2.0])
    def test_eps_insensitivity_on_stable_family(self, kappa):
        spec = pr.stable_process(1.0)
        f = gr.power(kappa)
        v1 = symbol_integral_criterion(spec, 0.0, f, eps=1.0, verify_eps=False)
        v2 = symbol_integral_criterion(spec, 0.0, f, eps=0.5, verify_eps=False)
        assert v1.state == v2.state


class TestConditionA1:
    @pytest.mark.parametrize("alpha,expect", [(0.5, 1 / 3), (1.0, 1.0), (1.5, 3.0)])
    def test_stable_witness_closed_form(self, alpha, expect):
        rep = check_A1(pr.raw_stable_process(alpha).levy.measure)
        assert rep.holds
        assert rep.witness == pytest.approx(expect, rel=0.05)

    def test_slow_variation_fails(self):
        rep = check_A1(pr.slow_variation_process().levy.measure)
        assert rep.fails

    def test_atom_measure_holds_with_zero_witness(self):
        rep = check_A1(pr.atom_process().levy.measure)
        assert rep.holds and rep.witness == 0.0

    def test_ball_version_on_variable_order(self):
        rep = check_A1(pr.variable_order_process(), x=0.0, ball_radius=0.5)
        assert rep.holds
        # sup over the ball of alpha/(2-alpha) at alpha = 1.7
        assert rep.witness == pytest.approx(1.7 / 0.3, rel=0.05)

    def test_sde_family_inherits_driver_balance(self):
        rep = check_A1(pr.sde_process(), x=0.0, ball_radius=0.5)
        assert rep.holds

    def test_vanishing_tail_fails_with_reason(self):
        import levyup.measures as ms

        rep = check_A1(ms.null_measure())
        assert rep.fails and "vanishes" in rep.reason


class TestConditionA2:
    def test_power_07_holds_via_shortcut(self):
        rep = check_A2(gr.power(0.7))
        assert rep.holds and rep.shortcut

    def test_sqrt_fails(self):
        rep = check_A2(gr.sqrt_t())
        assert rep.fails

    def test_direct_witness_matches_closed_form(self):
        # r^2 int_{r^{10/7}}^1 t^{-1.4} dt / r^{10/7} = (1 - r^{4/7}) / 0.4
        rep_direct = check_A2(gr.power(0.7), use_shortcut=False)
        r = np.asarray(rep_direct.grid, float)
        expected = np.max((1.0 - r ** (4.0 / 7.0)) / 0.4)
        assert rep_direct.holds
        assert rep_direct.witness == pytest.approx(expected, rel=1e-4)

    def test_shortcut_agrees_with_direct(self):
        a = check_A2(gr.power(0.7), use_shortcut=True)
        b = check_A2(gr.power(0.7), use_shortcut=False)
        assert a.verdict == b.verdict == "holds"


class TestBgIndex:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_stable_index_recovered(self, alpha):
        m = pr.raw_stable_process(alpha).levy.measure
        assert bg_index(m) == pytest.approx(alpha, abs=0.02)

    def test_atom_measure_index_zero(self):
        assert bg_index(pr.atom_process().levy.measure) == pytest.approx(0.0, abs=0.02)

    def test_log_density_index_zero(self):
        # every positive moment converges by comparison with y^{a-1}/log^2
        m = pr.log_smooth_process().levy.measure
        assert bg_index(m) == pytest.approx(0.0, abs=0.02)

    def test_slow_variation_index_near_two(self):
        # the true index is 2, but its moment integrals diverge only through
        # log factors, invisible within the dyadic depth; the estimate lands
        # just below
        m = pr.slow_variation_process().levy.measure
        beta = bg_index(m, settings=CriteriaSettings(n_levels=60))
        assert 1.9 <= beta <= 2.0

    def test_monotone_under_small_jump_thickening(self):
        b1 = bg_index(pr.raw_stable_process(1.0).levy.measure)
        b2 = bg_index(pr.raw_stable_process(1.3).levy.measure)
        assert b2 > b1

    def test_tolerance_validated(self):
        with pytest.raises(ValueError):
            bg_index(pr.cauchy_process().levy.measure, tol=0.5)


class TestClassifyLevy:
    def test_cauchy_zero(self):
        res = classify_levy(pr.cauchy_process(), gr.power(0.8))
        assert res.outcome == "zero"
        assert "A1" in res.assumptions_used and "Sector" in res.assumptions_used

    def test_cauchy_infinity(self):
        res = classify_levy(pr.cauchy_process(), gr.power(1.2))
        assert res.outcome == "infinity"

    def test_slow_variation_honest_indeterminate(self):
        res = classify_levy(pr.slow_variation_process(), gr.sqrt_t())
        assert res.outcome == "indeterminate"
        assert "A1 and A2" in res.reason

    def test_constant_growth_is_upper(self):
        res = classify_levy(pr.cauchy_process(), gr.constant(0.5))
        assert res.outcome == "zero"

    def test_gaussian_part_rejected(self):
        import levyup.measures as ms
        from levyup.symbols import LevyTriplet, ProcessSpec

        tri = LevyTriplet(b=np.zeros(1), Q=np.array([[1.0]]),
                          measure=ms.stable_measure(1.0))
        spec = ProcessSpec(kind="levy", dim=1,
                           symbol=lambda x, xi: np.abs(xi[:, 0]) + 0j, levy=tri)
        with pytest.raises(ValueError, match="diffusion"):
            classify_levy(spec, gr.power(0.8))

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("gap", [-0.3, -0.1, 0.1, 0.3])
    def test_full_dichotomy_matrix(self, alpha, gap):
        res = classify_levy(pr.raw_stable_process(alpha), gr.power(1 / alpha + gap))
        assert res.outcome == ("infinity" if gap > 0 else "zero")


class TestClassifyPower:
    def test_below_half_unconditional(self):
        res = classify_power(pr.slow_variation_process(), 0.3)
        assert res.outcome == "zero"

    def test_at_half_with_balance(self):
        res = classify_power(pr.raw_stable_process(1.2), 0.5)
        assert res.outcome == "zero" and res.assumptions_used == ["A1"]

    def test_at_half_without_balance(self):
        res = classify_power(pr.slow_variation_process(), 0.5)
        assert res.outcome == "indeterminate"

    def test_moment_route(self):
        spec = pr.raw_stable_process(1.5)
        assert classify_power(spec, 0.6).outcome == "zero"
        assert classify_power(spec, 0.8).outcome == "infinity"


class TestLtpUpper:
    def test_variable_order(self):
        res = classify_ltp_upper(pr.variable_order_process(), 0.0, gr.power(0.6))
        assert res.outcome == "zero"

    def test_stable_type(self):
        alpha = 1.5
        res = classify_ltp_upper(pr.stable_type_process(alpha), 0.0,
                                 gr.power(1 / alpha - 0.05))
        assert res.outcome == "zero"

    def test_sde(self):
        res = classify_ltp_upper(pr.sde_process(), 0.0, gr.power(0.8))
        assert res.outcome == "zero"

    def test_too_slow_growth_indeterminate(self):
        res = classify_ltp_upper(pr.variable_order_process(), 0.0, gr.power(1.2))
        assert res.outcome == "indeterminate"

    def test_majorization_route_flag(self):
        res = classify_ltp_upper(pr.variable_order_process(), 0.0, gr.power(0.6),
                                 use_majorization_route=True)
        assert res.outcome == "zero"

    def test_levy_kind_rejected(self):
        with pytest.raises(ValueError):
            classify_ltp_upper(pr.cauchy_process(), 0.0, gr.power(0.8))


class TestLtpLower:
    def test_variable_order_blowup(self):
        res = classify_ltp_lower(pr.variable_order_process(), 0.0, gr.power(0.8))
        assert res.outcome == "infinity"

    def test_cauchy_fast_growth(self):
        res = classify_ltp_lower(pr.cauchy_process(), 0.0, gr.power(1.2))
        assert res.outcome == "infinity"

    def test_cauchy_linear_growth_lower_bound(self):
        res = classify_ltp_lower(pr.cauchy_process(), 0.0, gr.power(1.0), C=1.0)
        assert res.outcome == "lower_bound"
        assert res.c_over_5 == pytest.approx(0.2)

    def test_upper_regime_stays_indeterminate(self):
        res = classify_ltp_lower(pr.cauchy_process(), 0.0, gr.power(0.8))
        assert res.outcome == "indeterminate"

    def test_comparability_and_growth_conditions(self):
        vo = pr.variable_order_process()
        assert check_C1(vo, 0.0, gr.power(0.8)).holds
        assert check_C1(pr.cauchy_process(), 0.0, gr.power(1.0)).holds
        rep = check_C2(pr.cauchy_process(), 0.0, gr.power(1.0))
        assert rep.holds
        assert rep.witness == pytest.approx(1.0, abs=0.05)  # fitted growth order

    def test_fitted_growth_exponent(self):
        assert fit_symbol_growth(pr.stable_process(1.5), 0.0, 0.0) == pytest.approx(
            1.5, abs=0.01
        )


class TestChainConsistency:
    MODELS = [
        pr.cauchy_process,
        lambda: pr.raw_stable_process(0.5),
        lambda: pr.raw_stable_process(1.5),
        lambda: pr.stable_process(1.2),
    ]

    @pytest.mark.parametrize("factory", MODELS)
    @pytest.mark.parametrize("gap", [-0.2, 0.2])
    def test_tail_and_symbol_verdicts_agree(self, factory, gap):
        spec = factory()
        alpha = spec.stable_family[0]
        f = gr.power(1 / alpha + gap)
        assert check_A1(spec.levy.measure).holds
        tail_states = {
            tail_integral_criterion(spec, None, f, 2.0**k).state for k in (-2, 0, 2)
        }
        sym = symbol_integral_criterion(spec, 0.0, f)
        if sym.converges:
            assert "converges" in tail_states
        else:
            assert sym.diverges and tail_states == {"diverges"}

    @pytest.mark.parametrize("factory", [
        pr.variable_order_process,
        lambda: pr.stable_type_process(1.2),
        pr.sde_process,
    ])
    def test_converse_consistency_inf_ball(self, factory):
        # wherever the ball balance holds and the inf-ball tail integral
        # converges, the inf-ball symbol integral converges as well
        spec = factory()
        f = gr.power(0.5)
        assert check_A1(spec, x=0.0, ball_radius=0.5).holds
        v_tail = tail_integral_criterion(spec, 0.0, f, 10.0, ball_mode="inf",
                                         ball_scale=10.0)
        assert v_tail.converges
        v_sym = symbol_integral_criterion(spec, 0.0, f, ball_mode="inf",
                                          ball_scale=10.0)
        assert v_sym.converges


class TestExitBounds:
    def test_raw_cauchy_anchors(self):
        spec = pr.raw_stable_process(1.0)
        eb = exit_bounds(spec, 0.0, 0.1, 0.5)
        assert eb.tail_intensity == pytest.approx(2.0)
        assert eb.survival_bound == pytest.approx(1.0 / 1.2)
        assert eb.expected_exit == pytest.approx(0.5)
        assert eb.exponential_shape == pytest.approx(np.exp(-0.2))

    def test_degenerate_time(self):
        eb = exit_bounds(pr.raw_stable_process(1.0), 0.0, 0.0, 0.5)
        assert eb.survival_bound == 1.0
        assert eb.lower == 0.0

    def test_bounds_ranges(self):
        eb = exit_bounds(pr.variable_order_process(), 0.0, 0.3, 0.4, c_lower=0.2)
        assert 0.0 < eb.survival_bound <= 1.0
        assert eb.expected_exit > 0
        assert 0.0 <= eb.lower <= 1.0
        assert eb.schilling_factor > 0
        assert 0.0 < eb.symbol_survival_factor <= 1.0
