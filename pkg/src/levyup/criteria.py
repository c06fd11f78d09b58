"""Integral convergence criteria and upper/lower growth classification.

All improper integrals over (0, 1] are handled by one dyadic engine: the
integral is computed block-by-block over [2^{-(n+1)}, 2^{-n}] and classified
from the behaviour of the block sums.  Convergence evidence is a geometric
block-ratio bound; divergence evidence is block sums bounded away from zero
or increasing.  Anything else is reported Indeterminate rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import BracketIndeterminate, EvaluationFailure, InverseFailure, ZeroTail
from .growth import GrowthFunction
from .measures import LevyMeasureModel
from .symbols import (
    ConditionReport,
    ProcessSpec,
    ball_grid,
    sector_check,
    symbol_extremum,
    tail_trend,
)


@dataclass(frozen=True)
class CriteriaSettings:
    n_levels: int = 60            # deepest dyadic level
    nodes_per_block: int = 16     # Gauss-Legendre order per block
    ratio_max: float = 0.9925     # geometric evidence threshold for block ratios
    floor: float = 1e-6           # divergence floor for last-half block sums
    c_exponents: tuple = tuple(range(-4, 9))   # scan 2^k for "some c > 0"
    r_grid_lo: float = 1e-6
    r_grid_hi: float = 1e-1
    r_grid_n: int = 30
    kappa_margin: float = 0.05    # comparability exponent must stay below 1 by this
    band_tol: float = 0.02        # critical-band half width for power classification
    ball_points: int = 17
    xi_radii: int = 48

    def r_grid(self):
        return np.logspace(np.log10(self.r_grid_hi), np.log10(self.r_grid_lo),
                           self.r_grid_n)

    def t_grid(self):
        return np.logspace(-1, -6, 26)


DEFAULTS = CriteriaSettings()

_GL_CACHE = {}


def _gl_nodes(order):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


@dataclass
class IntegralVerdict:
    """Outcome of a dyadic convergence test of int_0^1 g(t) dt."""

    state: str  # "converges" | "diverges" | "indeterminate"
    value: float | None
    block_sums: np.ndarray
    n_max: int
    note: str = ""

    @property
    def converges(self):
        return self.state == "converges"

    @property
    def diverges(self):
        return self.state == "diverges"


@dataclass
class Classification:
    """Upper-function decision with the evidence that grounds it."""

    outcome: str  # "zero" | "infinity" | "lower_bound" | "indeterminate"
    c_over_5: float | None = None
    assumptions_used: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)
    reason: str = ""

    @property
    def definite(self):
        return self.outcome != "indeterminate"


@dataclass
class ExitBounds:
    """Closed exit-time bound factors at one (t, r); constants stay symbolic.

    ``schilling_factor`` is t * sup-sup |q| (to be multiplied by the absolute
    constant); ``survival_bound`` and ``expected_exit`` are constant-free;
    ``exponential_shape`` is exp(-t G(x, 2r)) up to the two uniform constants;
    ``lower`` is (1-c) t G(x, 2r) clipped to [0, 1]; ``symbol_survival_factor``
    is 1/(1 + t h(x, r)) with h the swapped-order symbol extremum.
    """

    schilling_factor: float
    survival_bound: float
    expected_exit: float
    exponential_shape: float
    lower: float
    symbol_survival_factor: float
    tail_intensity: float  # G(x, 2r) itself


# ---------------------------------------------------------------------------
# the dyadic engine
# ---------------------------------------------------------------------------


def dyadic_integral(g, n_max=DEFAULTS.n_levels, nodes=DEFAULTS.nodes_per_block,
                    settings=DEFAULTS):
    """Classify int_0^1 g(t) dt from block sums over [2^{-(n+1)}, 2^{-n}].

    Converges: the last half of the block ratios stays below ``ratio_max``;
    the value is the partial sum plus a geometric tail bound (exact for
    exactly geometric decay).  Diverges: last-half block sums all above
    ``floor``, or increasing.  Otherwise Indeterminate.
    """
    if n_max < 8:
        raise ValueError("n_max must be at least 8")
    x_ref, w_ref = _gl_nodes(nodes)
    sums = np.empty(n_max + 1)
    for n in range(n_max + 1):
        a, b = 2.0 ** -(n + 1), 2.0**-n
        t = 0.5 * (b - a) * x_ref + 0.5 * (a + b)
        try:
            vals = np.asarray(g(t), float)
            if vals.shape != t.shape:
                vals = np.array([float(g(ti)) for ti in t])
        except Exception as exc:
            if isinstance(exc, (KeyboardInterrupt, SystemExit)):
                raise
            raise EvaluationFailure(f"integrand failed on block {n}: {exc}") from exc
        if np.any(~np.isfinite(vals)):
            raise EvaluationFailure(f"integrand not finite on block {n}")
        sums[n] = 0.5 * (b - a) * float(w_ref @ vals)
    return _classify_blocks(sums, settings)


def _classify_blocks(sums, settings=DEFAULTS):
    n_max = len(sums) - 1
    half = len(sums) // 2
    tiny = 1e-300
    last = sums[half:]
    if np.all(sums <= tiny):
        return IntegralVerdict("converges", float(sums.sum()), sums, n_max,
                               note="all blocks vanish")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = sums[1:] / np.where(sums[:-1] > tiny, sums[:-1], np.nan)
    last_ratios = ratios[half - 1:]
    finite = last_ratios[np.isfinite(last_ratios)]
    if finite.size and float(np.max(finite)) <= settings.ratio_max:
        rho = float(np.max(finite))
        tail = sums[-1] * rho / (1.0 - rho)
        return IntegralVerdict(
            "converges", float(sums.sum() + tail), sums, n_max,
            note=f"geometric ratio {rho:.4f}",
        )
    increasing = np.all(np.diff(last) >= -1e-12 * np.abs(last[:-1]))
    if float(np.min(last)) >= settings.floor or (increasing and last[-1] > tiny):
        return IntegralVerdict("diverges", None, sums, n_max,
                               note="block sums bounded below" if not increasing
                               else "block sums increasing")
    return IntegralVerdict("indeterminate", None, sums, n_max,
                           note="no geometric or divergence evidence")


# ---------------------------------------------------------------------------
# tail and symbol integral criteria
# ---------------------------------------------------------------------------


def _ball_states(spec, x, radius, n_z):
    z = ball_grid(x, radius, spec.dim, n_z)
    return z[:, 0] if spec.dim == 1 else z


def _ball_tail_extremum(spec, x, radius, threshold, mode, n_z=DEFAULTS.ball_points):
    vals = spec.tail_at(_ball_states(spec, x, radius, n_z), threshold)
    return float(vals.max() if mode == "sup" else vals.min())


def tail_integral_criterion(spec: ProcessSpec, x, f: GrowthFunction, c,
                            ball_mode=None, ball_scale=1.0,
                            fixed_ball_radius=None, settings=DEFAULTS):
    """Dyadic verdict for the jump-tail integral int_0^1 nu(., |y| >= c f(t)) dt.

    ``ball_mode`` None evaluates the plain tail (Levy case); "sup"/"inf" take
    the extremum over the state ball of radius ``ball_scale * f(t)`` (or a
    fixed radius when ``fixed_ball_radius`` is given).
    """
    if c <= 0:
        raise ValueError("c must be positive")
    if (ball_mode is None) != (spec.kind == "levy"):
        raise ValueError("ball_mode must be None exactly for Levy processes")

    if ball_mode is None:
        measure = spec.levy.measure

        def g(t):
            return np.asarray(measure.tail(c * f(t)), float)

    else:
        mode = {"sup": "sup", "inf": "inf"}[ball_mode]

        def g(t):
            t_arr = np.atleast_1d(t)
            out = np.empty(t_arr.shape)
            for i, ti in enumerate(t_arr):
                ft = float(f(ti))
                radius = fixed_ball_radius if fixed_ball_radius is not None \
                    else ball_scale * ft
                out[i] = _ball_tail_extremum(spec, x, radius, c * ft, mode,
                                             settings.ball_points)
            return out if np.ndim(t) else out[0]

    return dyadic_integral(g, settings.n_levels, settings.nodes_per_block, settings)


def symbol_integral_criterion(spec: ProcessSpec, x, f: GrowthFunction, eps=1.0,
                              ball_mode=None, ball_scale=1.0, value_kind="abs",
                              verify_eps=True, settings=DEFAULTS):
    """Dyadic verdict for the symbol integral with frequency cap 1/(eps f(t)).

    For state-dependent processes the state ball has radius ball_scale * f(t)
    and ``ball_mode`` picks sup or inf over it.  The verdict must agree when
    recomputed at eps/2 (square-root subadditivity makes it scale-free); a
    disagreement is reported as Indeterminate.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    mode = {None: "sup_sup", "sup": "sup_sup", "inf": "inf_sup"}[ball_mode]
    if value_kind == "re":
        mode = {"sup_sup": "sup_sup", "inf_sup": "inf_sup_re"}[mode]

    def make_g(e):
        def g(t):
            t_arr = np.atleast_1d(t)
            out = np.empty(t_arr.shape)
            for i, ti in enumerate(t_arr):
                ft = float(f(ti))
                radius = 0.0 if spec.kind == "levy" else ball_scale * ft
                out[i] = symbol_extremum(
                    spec, x, radius, 1.0 / (e * ft), mode,
                    n_z=settings.ball_points, n_radii=settings.xi_radii,
                )
            return out if np.ndim(t) else out[0]
        return g

    verdict = dyadic_integral(make_g(eps), settings.n_levels,
                              settings.nodes_per_block, settings)
    if verify_eps:
        check = dyadic_integral(make_g(eps / 2.0), settings.n_levels,
                                settings.nodes_per_block, settings)
        if check.state != verdict.state and "indeterminate" not in (
            check.state, verdict.state
        ):
            return IntegralVerdict(
                "indeterminate", None, verdict.block_sums, verdict.n_max,
                note=f"eps-inconsistency: {verdict.state} at {eps}, "
                     f"{check.state} at {eps/2}",
            )
    return verdict


# ---------------------------------------------------------------------------
# side conditions
# ---------------------------------------------------------------------------


def check_A1(source, x=0.0, ball_radius=None, r_grid=None, settings=DEFAULTS):
    """Small-jump/tail balance: limsup_{r->0} trunc2(r) / (r^2 G(r)) < infinity.

    ``source`` is a LevyMeasureModel or a ProcessSpec; with ``ball_radius``
    set (state-dependent case) the ratio is first maximized over the state
    ball.  Fails when the tail vanishes on the grid, when the ratio exceeds
    1e3, or when it grows steadily in log-log as r -> 0.
    """
    if r_grid is None:
        r_grid = np.logspace(np.log10(settings.r_grid_hi), -4, settings.r_grid_n)
    r_grid = np.asarray(r_grid, float)
    if r_grid[0] < r_grid[-1]:
        r_grid = r_grid[::-1]
    if r_grid.min() > 1e-4 + 1e-12:
        raise ValueError("r_grid must reach down to 1e-4")

    if isinstance(source, LevyMeasureModel):
        def ratio(r):
            g = float(source.tail(r))
            if g <= 0.0:
                raise ZeroTail(f"tail vanishes at r={r}")
            return float(source.trunc2(r)) / (r**2 * g)
    else:
        spec = source
        radius = ball_radius or 0.0
        z1 = _ball_states(spec, x, radius, settings.ball_points)

        def ratio(r):
            g = spec.tail_at(z1, r)
            t2 = spec.trunc2_at(z1, r)
            if np.any(g <= 0.0):
                raise ZeroTail(f"tail vanishes at r={r} on the state ball")
            return float(np.max(t2 / (r**2 * g)))

    witness = np.empty(len(r_grid))
    first_live = 0
    for i, r in enumerate(r_grid):
        try:
            witness[i] = ratio(r)
        except ZeroTail as exc:
            if i >= len(r_grid) // 2:
                # no jump mass along the approach to 0: the balance fails
                return ConditionReport("fails", np.inf, r_grid, reason=str(exc))
            first_live = i + 1  # radius above the support; skip it
            witness[i] = np.nan
    r_live, w_live = r_grid[first_live:], witness[first_live:]
    label, est = tail_trend(r_live, w_live)
    if label == "stable":
        return ConditionReport("holds", est, r_grid)
    if label == "diverging":
        return ConditionReport("fails", est, r_grid, reason="ratio grows as r -> 0")
    return ConditionReport("indeterminate", est, r_grid, reason="unstable ratio")


def check_A2(f: GrowthFunction, r_grid=None, use_shortcut=True, settings=DEFAULTS):
    """Growth condition on f: r^2 int_{f^{-1}(r)}^1 f(t)^{-2} dt <= M f^{-1}(r).

    The direct witness is maximized over the grid.  A sufficient shortcut
    (f(t)/t increasing to infinity while f(t)/t^a decreases to 0 for some
    a > 1/2) is tried first when ``use_shortcut`` and reported with the
    shortcut flag set.
    """
    if r_grid is None:
        r_grid = np.logspace(np.log10(settings.r_grid_hi),
                             np.log10(settings.r_grid_lo), settings.r_grid_n)
    r_grid = np.asarray(r_grid, float)
    if r_grid[0] < r_grid[-1]:
        r_grid = r_grid[::-1]

    if use_shortcut and _a2_shortcut(f):
        rep = ConditionReport("holds", float("nan"), r_grid, shortcut=True,
                              reason="f/t increases to infinity, f/t^a decreases")
        rep.witness = _a2_direct_witness(f, r_grid).max()
        return rep
    witness = _a2_direct_witness(f, r_grid)
    label, est = tail_trend(r_grid, witness)
    if label == "stable":
        return ConditionReport("holds", est, r_grid)
    if label == "diverging":
        return ConditionReport("fails", est, r_grid, reason="witness grows as r -> 0")
    return ConditionReport("indeterminate", est, r_grid, reason="unstable witness")


def _a2_direct_witness(f, r_grid):
    import warnings as _warnings

    out = np.empty(len(r_grid))
    for i, r in enumerate(r_grid):
        t0 = f.inverse(r)
        if t0 <= 0.0:
            raise InverseFailure(f"generalized inverse vanished at r={r}")
        if t0 >= 1.0:
            out[i] = 0.0
            continue
        # log-time substitution keeps near-singular integrands conditioned
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(
                lambda u: np.exp(u) * float(f(np.exp(u))) ** -2,
                np.log(t0), 0.0, limit=200,
            )
        out[i] = r**2 * val / t0
    return out


def _a2_shortcut(f, alphas=None):
    t = np.logspace(-12, -0.3, 48)
    ft = f(t)
    over_t = ft / t
    # f(t)/t must increase (as t decreases) without bound
    if not (np.all(np.diff(over_t) <= 1e-9 * over_t[:-1]) and over_t[0] > 10 * over_t[-1]):
        return False
    if alphas is None:
        alphas = np.linspace(0.55, 0.95, 9)
    for a in alphas:
        ratio = ft / t**a
        if np.all(np.diff(ratio) >= -1e-9 * ratio[1:]) and ratio[0] < 0.1 * ratio[-1]:
            return True
    return False


# ---------------------------------------------------------------------------
# small-jump activity index
# ---------------------------------------------------------------------------


def bg_index(measure: LevyMeasureModel, tol=0.02, settings=DEFAULTS):
    """Small-jump activity index inf{a : int_{|y|<1} |y|^a nu(dy) < infinity}.

    The radial moment is rewritten through the tail,
    int_{|y|<1} |y|^a nu(dy) = int_0^1 a t^{a-1} (G(t) - G(1^-)) dt,
    and classified by the dyadic engine; bisection on a in [0, 2].
    """
    if not 0 < tol <= 0.1:
        raise ValueError("tol must lie in (0, 0.1]")
    g1 = float(measure.tail(1.0 - 1e-12))

    def verdict_at(a):
        def g(t):
            t_arr = np.asarray(t, float)
            if a == 0.0:
                base = np.ones_like(t_arr) / t_arr
            else:
                base = a * t_arr ** (a - 1.0)
            return base * np.maximum(np.asarray(measure.tail(t_arr), float) - g1, 0.0)

        return dyadic_integral(g, settings.n_levels, settings.nodes_per_block,
                               settings)

    lo, hi = 0.0, 2.0  # moment at 2 is finite for every Levy measure
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        v = verdict_at(mid)
        if v.state == "indeterminate":
            nudged = mid + (hi - lo) / 8.0
            v = verdict_at(nudged)
            if v.state == "indeterminate":
                raise BracketIndeterminate(
                    f"moment test indeterminate at a={mid} and a={nudged}"
                )
            mid = nudged
        if v.converges:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# classification drivers
# ---------------------------------------------------------------------------


def _require_pure_jump(spec):
    tri = spec.levy if spec.kind == "levy" else spec.driver
    if tri is not None and tri.has_gaussian_part:
        raise ValueError(
            "classification requires a vanishing diffusion part (Q = 0); "
            "Gaussian parts are supported in simulation only"
        )


def classify_levy(spec: ProcessSpec, f: GrowthFunction, settings=DEFAULTS):
    """Zero/Infinity dichotomy for a Levy process via the jump-tail integral.

    Verifies the sector condition and one of the two side conditions first;
    when neither side condition holds the dichotomy can genuinely fail, so
    the outcome is Indeterminate with the reason recorded.
    """
    if spec.kind != "levy":
        raise ValueError("classify_levy expects a Levy process")
    _require_pure_jump(spec)
    evidence = {}
    sector = sector_check(spec)
    evidence["sector"] = sector
    a1 = check_A1(spec.levy.measure, settings=settings)
    evidence["A1"] = a1
    grounding = []
    if a1.holds:
        grounding.append("A1")
    else:
        try:
            a2 = check_A2(f, settings=settings)
        except InverseFailure as exc:
            a2 = ConditionReport("fails", np.inf, np.array([]), reason=str(exc))
        evidence["A2"] = a2
        if a2.holds:
            grounding.append("A2")
    if not sector.holds:
        return Classification("indeterminate", evidence=evidence,
                              reason="sector condition unverified")
    if not grounding:
        return Classification("indeterminate", evidence=evidence,
                              reason="A1 and A2 both fail")
    grounding.append("Sector")

    verdicts = {}
    n_diverge = 0
    for k in settings.c_exponents:
        c = 2.0**k
        v = tail_integral_criterion(spec, None, f, c, settings=settings)
        verdicts[c] = v
        if v.converges:
            evidence["tail_integrals"] = verdicts
            return Classification("zero", assumptions_used=grounding,
                                  evidence=evidence)
        if v.diverges:
            n_diverge += 1
    evidence["tail_integrals"] = verdicts
    if n_diverge == len(settings.c_exponents):
        return Classification("infinity", assumptions_used=grounding,
                              evidence=evidence)
    return Classification("indeterminate", assumptions_used=grounding,
                          evidence=evidence, reason="mixed integral evidence")


def classify_power(spec: ProcessSpec, kappa, settings=DEFAULTS):
    """Power-function decision f(t) = t^kappa.

    kappa < 1/2 is an upper regime for every pure-jump Levy-type process;
    kappa = 1/2 needs the small-jump balance condition; kappa > 1/2 reduces
    to the radial moment int_{|y|<1} |y|^{1/kappa} nu(dy), with the activity
    index as fallback and an Indeterminate band around kappa = 1/beta.
    """
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if spec.kind != "levy":
        raise ValueError("classify_power expects a Levy process")
    _require_pure_jump(spec)
    evidence = {}
    if kappa < 0.5 - 1e-12:
        return Classification("zero", evidence=evidence,
                              reason="kappa below 1/2 is unconditional")
    a1 = check_A1(spec.levy.measure, settings=settings)
    evidence["A1"] = a1
    if abs(kappa - 0.5) <= 1e-12:
        if a1.holds:
            return Classification("zero", assumptions_used=["A1"],
                                  evidence=evidence)
        return Classification("indeterminate", evidence=evidence,
                              reason="kappa = 1/2 without small-jump balance")
    sector = sector_check(spec)
    evidence["sector"] = sector
    if not sector.holds:
        return Classification("indeterminate", evidence=evidence,
                              reason="sector condition unverified")
    measure = spec.levy.measure
    g1 = float(measure.tail(1.0 - 1e-12))
    a = 1.0 / kappa

    def g(t):
        t_arr = np.asarray(t, float)
        return a * t_arr ** (a - 1.0) * np.maximum(
            np.asarray(measure.tail(t_arr), float) - g1, 0.0
        )

    v = dyadic_integral(g, settings.n_levels, settings.nodes_per_block, settings)
    evidence["moment_integral"] = v
    if v.converges:
        return Classification("zero", assumptions_used=["Sector"], evidence=evidence)
    if v.diverges:
        return Classification("infinity", assumptions_used=["Sector"],
                              evidence=evidence)
    beta = bg_index(measure, settings.band_tol, settings)
    evidence["bg_index"] = beta
    if abs(kappa - 1.0 / max(beta, 1e-9)) < settings.band_tol:
        return Classification("indeterminate", evidence=evidence,
                              reason="kappa in the critical band around 1/beta")
    outcome = "zero" if kappa < 1.0 / beta else "infinity"
    return Classification(outcome, assumptions_used=["Sector"], evidence=evidence)


def majorization_holds(spec: ProcessSpec, x, ball_radius, settings=DEFAULTS):
    """Spot-check: some state in each ball dominates the symbol sup in |q|."""
    xi = np.logspace(0, 4, 9)
    xi_pts = xi[:, None] if spec.dim == 1 else np.pad(xi[:, None],
                                                      ((0, 0), (0, spec.dim - 1)))
    for r in np.linspace(ball_radius / 4, ball_radius, 4):
        z = ball_grid(x, r, spec.dim, settings.ball_points)
        table = np.array([np.abs(spec.q(zi, xi_pts)) for zi in z])
        sup = table.max(axis=0)
        if not np.any(np.all(table >= sup[None, :] * (1 - 1e-9), axis=1)):
            return False
    return True


def classify_ltp_upper(spec: ProcessSpec, x, f: GrowthFunction,
                       ball_radius=0.5, use_majorization_route=False,
                       settings=DEFAULTS):
    """Upper-function decision for a state-dependent or SDE process.

    The symbol route (sup over the moving state ball of the capped symbol)
    needs no side condition; its convergence alone yields Zero.  The tail
    route needs the sector condition and the ball version of the small-jump
    balance.  An optional majorization route accepts the fixed-ball tail
    integral under the growth condition on f.
    """
    if spec.kind == "levy":
        raise ValueError("use classify_levy for Levy processes")
    _require_pure_jump(spec)
    evidence = {}

    v2 = symbol_integral_criterion(spec, x, f, eps=1.0, ball_mode="sup",
                                   settings=settings)
    evidence["symbol_integral"] = v2
    if v2.converges:
        return Classification("zero", assumptions_used=[], evidence=evidence,
                              reason="symbol route")

    sector = sector_check(spec, x_ball=(x, ball_radius))
    evidence["sector"] = sector
    a1p = check_A1(spec, x=x, ball_radius=ball_radius, settings=settings)
    evidence["A1'"] = a1p
    if sector.holds and a1p.holds:
        for k in settings.c_exponents:
            c = 2.0**k
            v1 = tail_integral_criterion(spec, x, f, c, ball_mode="sup",
                                         settings=settings)
            evidence.setdefault("tail_integrals", {})[c] = v1
            if v1.converges:
                return Classification("zero", assumptions_used=["Sector", "A1'"],
                                      evidence=evidence, reason="tail route")

    if use_majorization_route:
        a2 = check_A2(f, settings=settings)
        evidence["A2"] = a2
        if a2.holds and majorization_holds(spec, x, ball_radius, settings):
            for k in settings.c_exponents:
                c = 2.0**k
                v1p = tail_integral_criterion(
                    spec, x, f, c, ball_mode="sup",
                    fixed_ball_radius=ball_radius, settings=settings,
                )
                evidence.setdefault("fixed_ball_tail", {})[c] = v1p
                if v1p.converges:
                    return Classification(
                        "zero", assumptions_used=["A2", "Majorization"],
                        evidence=evidence, reason="fixed-ball tail route",
                    )
    return Classification("indeterminate", evidence=evidence,
                          reason="no convergent route")


def _limsup_diverges(t_grid, values):
    label, _ = tail_trend(t_grid, values, blowup=1e6)
    return label == "diverging"


def fit_symbol_growth(spec: ProcessSpec, x, ball_radius, settings=DEFAULTS):
    """Least-squares growth exponent of sup-ball |q| on |xi| in [1e2, 1e5]."""
    xi = np.logspace(2, 5, 13)
    vals = np.empty(len(xi))
    for i, r in enumerate(xi):
        vals[i] = symbol_extremum(spec, x, ball_radius, r, "sup_sup",
                                  n_z=settings.ball_points,
                                  n_radii=settings.xi_radii)
    slope = np.polyfit(np.log(xi), np.log(np.maximum(vals, 1e-300)), 1)[0]
    return float(min(max(slope, 1e-6), 2.0))


def check_C1(spec: ProcessSpec, x, f: GrowthFunction, settings=DEFAULTS):
    """Comparability of sup-ball and inf-ball symbol sizes with a t^{-kappa}
    envelope, kappa < 1.  For a regularly varying f only the unit ball scale
    is tested; a z-independent symbol passes trivially."""
    if spec.kind == "levy":
        return ConditionReport("holds", 0.0, np.array([]), reason="state-free symbol")
    t_grid = settings.t_grid()
    R_set = (1.0,) if f.regularly_varying else (1.0, 2.0, 4.0)
    worst = 0.0
    for R in R_set:
        ratios = np.empty(len(t_grid))
        for i, t in enumerate(t_grid):
            ft = float(f(t))
            num = symbol_extremum(spec, x, ft, 1.0 / ft, "sup_sup",
                                  n_z=settings.ball_points,
                                  n_radii=settings.xi_radii)
            den = symbol_extremum(spec, x, R * ft, 1.0 / ft, "inf_sup",
                                  n_z=settings.ball_points,
                                  n_radii=settings.xi_radii)
            if den <= 0:
                return ConditionReport("fails", np.inf, t_grid,
                                       reason="inf-ball symbol vanishes")
            ratios[i] = num / den
        kappa_fit = -np.polyfit(np.log(t_grid), np.log(ratios), 1)[0]
        worst = max(worst, kappa_fit)
        if kappa_fit >= 1.0 - settings.kappa_margin:
            return ConditionReport("fails", kappa_fit, t_grid,
                                   reason="comparability exponent reaches 1")
    return ConditionReport("holds", worst, t_grid)


def check_C2(spec: ProcessSpec, x, f: GrowthFunction, ball_radius=0.5,
             settings=DEFAULTS):
    """Polynomial symbol growth of fitted order a plus liminf t^{-2/a} f(t) = inf."""
    alpha = fit_symbol_growth(spec, x, ball_radius, settings)
    t_grid = settings.t_grid()
    w = t_grid ** (-2.0 / alpha) * f(t_grid)
    if _limsup_diverges(t_grid, w) and np.all(np.diff(w) >= -1e-9 * w[:-1]):
        rep = ConditionReport("holds", alpha, t_grid)
        return rep
    return ConditionReport("fails", alpha, t_grid,
                           reason="t^{-2/a} f(t) does not blow up")


def classify_ltp_lower(spec: ProcessSpec, x, f: GrowthFunction, C=1.0,
                       settings=DEFAULTS):
    """Lower growth decision: Infinity via the inf-ball symbol blow-up, or a
    LowerBound(C/5) via the comparability/growth conditions plus a divergent
    inf-ball integral.

    The blow-up witness is t * inf-ball sup-frequency Re q at frequency cap
    1/(C f(t)); square-root subadditivity makes its divergence C-free, so one
    level plus a halved spot check suffices.
    """
    if C <= 0:
        raise ValueError("C must be positive")
    _require_pure_jump(spec)
    evidence = {}
    t_grid = settings.t_grid()
    R_set = (1.0,) if f.regularly_varying else (1.0, 2.0, 4.0)

    def witness(R, C_loc):
        w = np.empty(len(t_grid))
        for i, t in enumerate(t_grid):
            ft = float(f(t))
            radius = 0.0 if spec.kind == "levy" else R * ft
            w[i] = t * symbol_extremum(spec, x, radius, 1.0 / (C_loc * ft),
                                       "inf_sup_re", n_z=settings.ball_points,
                                       n_radii=settings.xi_radii)
        return w

    blowup_all = True
    for R in R_set:
        w1 = witness(R, C)
        w2 = witness(R, C / 2.0)
        ok = _limsup_diverges(t_grid, w1) and _limsup_diverges(t_grid, w2)
        evidence[f"blowup_witness_R={R:g}"] = w1
        if not ok:
            blowup_all = False
            break
    if blowup_all:
        return Classification("infinity", evidence=evidence,
                              reason="symbol blow-up route")

    c1 = check_C1(spec, x, f, settings)
    evidence["C1"] = c1
    grounds = []
    if c1.holds:
        grounds.append("C1")
        if spec.kind != "levy":
            sec = sector_check(spec, x_ball=(x, float(f(1.0))))
            evidence["sector"] = sec
            if not sec.holds:
                grounds.remove("C1")
    if not grounds:
        c2 = check_C2(spec, x, f, settings=settings)
        evidence["C2"] = c2
        if c2.holds:
            grounds.append("C2")
    if not grounds:
        return Classification("indeterminate", evidence=evidence,
                              reason="neither comparability nor growth verified")

    if spec.kind == "levy":
        v_tail = tail_integral_criterion(spec, None, f, C, settings=settings)
    else:
        v_tail = tail_integral_criterion(spec, x, f, C, ball_mode="inf",
                                         ball_scale=C, settings=settings)
    evidence["inf_tail_integral"] = v_tail
    route = None
    if v_tail.diverges:
        route = "tail"
    else:
        a1p = check_A1(spec, x=x, ball_radius=float(f(1.0)), settings=settings) \
            if spec.kind != "levy" else check_A1(spec.levy.measure, settings=settings)
        evidence["A1'"] = a1p
        if a1p.holds:
            v_sym = symbol_integral_criterion(spec, x, f, eps=1.0,
                                              ball_mode=None if spec.kind == "levy" else "inf",
                                              ball_scale=C, settings=settings)
            evidence["inf_symbol_integral"] = v_sym
            if v_sym.diverges:
                route = "symbol"
                grounds.append("A1'")
    if route is None:
        return Classification("indeterminate", assumptions_used=grounds,
                              evidence=evidence,
                              reason="no divergent inf-ball integral")
    return Classification("lower_bound", c_over_5=C / 5.0,
                          assumptions_used=grounds, evidence=evidence,
                          reason=f"{route} route")


# ---------------------------------------------------------------------------
# exit-time bounds
# ---------------------------------------------------------------------------


def ball_tail_intensity(spec: ProcessSpec, x, r, settings=DEFAULTS):
    """G(x, r) = inf over the state ball B(x, r) of nu(z, {|y| > r})."""
    if spec.kind == "levy":
        return float(spec.levy.measure.tail(r))
    z = ball_grid(x, r, spec.dim, settings.ball_points)
    z1 = z[:, 0] if spec.dim == 1 else z
    return float(np.min(spec.tail_at(z1, r)))


def exit_bounds(spec: ProcessSpec, x, t, r, c_lower=0.5, settings=DEFAULTS):
    """All closed exit-time bound factors at (t, r); see ExitBounds."""
    if t < 0 or r <= 0:
        raise ValueError("need t >= 0 and r > 0")
    if not 0 <= c_lower <= 1:
        raise ValueError("c_lower must lie in [0, 1]")
    g2r = ball_tail_intensity(spec, x, 2 * r, settings)
    supsup = symbol_extremum(spec, x, r, 1.0 / r, "sup_sup",
                             n_z=settings.ball_points, n_radii=settings.xi_radii)
    h_swap = symbol_extremum(spec, x, r, 1.0 / (2 * r), "sup_inf_re",
                             n_z=settings.ball_points, n_radii=settings.xi_radii)
    return ExitBounds(
        schilling_factor=t * supsup,
        survival_bound=1.0 / (1.0 + t * g2r),
        expected_exit=np.inf if g2r == 0 else 1.0 / g2r,
        exponential_shape=float(np.exp(-t * g2r)),
        lower=float(min((1.0 - c_lower) * t * g2r, 1.0)),
        symbol_survival_factor=1.0 / (1.0 + t * h_swap),
        tail_intensity=g2r,
    )
