"""Process specifications and symbol-side evaluators.

A process is described either by a Levy triplet (b, Q, nu), by a
state-dependent family x -> (b(x), 0, nu(x, .)), or by an SDE driven by a
Levy process through a bounded coefficient sigma.  In every case it carries
a symbol q(x, xi), vectorized over xi, which all criteria consume.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DegenerateSymbol, QuadratureFailure
from .measures import LevyMeasureModel

QUAD_RTOL = 1e-8
QUAD_ATOL = 1e-12
QUAD_LIMIT = 200


@dataclass(frozen=True)
class LevyTriplet:
    """(b, Q, nu) with the jump compensation cut at |y| = 1."""

    b: np.ndarray
    Q: np.ndarray | None
    measure: LevyMeasureModel

    def __post_init__(self):
        object.__setattr__(self, "b", np.atleast_1d(np.asarray(self.b, float)))
        if self.Q is not None:
            q = np.atleast_2d(np.asarray(self.Q, float))
            if np.allclose(q, 0.0):
                q = None
            else:
                ev = np.linalg.eigvalsh(q)
                if ev.min() < -1e-12:
                    raise ValueError("Q must be positive semi-definite")
            object.__setattr__(self, "Q", q)

    @property
    def dim(self):
        return self.b.shape[0]

    @property
    def has_gaussian_part(self):
        return self.Q is not None


@dataclass(frozen=True)
class StateFamily:
    """State-dependent characteristics reduced to what the criteria consume."""

    tail: Callable      # (z array, r) -> nu(z, {|y| > r}), vectorized over z
    trunc2: Callable    # (z array, r) -> int_{|y|<=r} |y|^2 nu(z, dy)
    freeze: Callable    # z -> ProcessSpec of the Levy process frozen at z
    stable_params: Callable | None = None  # z array -> (alpha(z), sigma(z))


@dataclass(frozen=True)
class ProcessSpec:
    kind: str  # "levy" | "state_dependent" | "sde"
    dim: int
    symbol: Callable  # (x (d,), xi (m, d)) -> complex (m,)
    levy: LevyTriplet | None = None
    family: StateFamily | None = None
    driver: LevyTriplet | None = None
    sigma: Callable | None = None
    stable_family: tuple[float, float] | None = None  # (alpha, sigma): psi = (sigma|xi|)^alpha
    name: str = ""

    def q(self, x, xi):
        """Evaluate the symbol at state x on a stack of frequencies (m, d)."""
        x = np.atleast_1d(np.asarray(x, float))
        xi = np.asarray(xi, float)
        if xi.ndim == 1:
            xi = xi[:, None] if self.dim == 1 else xi[None, :]
        return np.asarray(self.symbol(x, xi), complex)

    def tail_at(self, z, r):
        """nu(z, {|y| > r}) for an array of states z (vectorized)."""
        z = np.atleast_1d(np.asarray(z, float))
        if self.kind == "levy":
            return np.full(z.shape[0], float(self.levy.measure.tail(r)))
        if self.kind == "state_dependent":
            return np.asarray(self.family.tail(z, r), float)
        s = np.abs(np.asarray(self.sigma(z), float))
        out = np.zeros(z.shape[0])
        ok = s > 0
        if np.any(ok):
            out[ok] = np.asarray(self.driver.measure.tail(r / s[ok]), float)
        return out

    def trunc2_at(self, z, r):
        z = np.atleast_1d(np.asarray(z, float))
        if self.kind == "levy":
            return np.full(z.shape[0], float(self.levy.measure.trunc2(r)))
        if self.kind == "state_dependent":
            return np.asarray(self.family.trunc2(z, r), float)
        s = np.abs(np.asarray(self.sigma(z), float))
        out = np.zeros(z.shape[0])
        ok = s > 0
        if np.any(ok):
            out[ok] = s[ok] ** 2 * np.asarray(
                self.driver.measure.trunc2(r / s[ok]), float
            )
        return out


# ---------------------------------------------------------------------------
# characteristic exponent by quadrature
# ---------------------------------------------------------------------------


def _quad(fun, a, b, scale=0.0, **kw):
    """Adaptive quadrature that accepts results whose error is negligible
    either relative to the value or to a caller-supplied magnitude ``scale``
    (used for oscillatory corrections riding on a large smooth term)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            fun, a, b, epsabs=QUAD_ATOL, epsrel=QUAD_RTOL, limit=QUAD_LIMIT,
            full_output=1, **kw
        )
    val, err = out[0], out[1]
    if not np.isfinite(val):
        raise QuadratureFailure(f"non-finite quadrature value on ({a}, {b})")
    if len(out) >= 4:  # quadpack reported trouble; judge the error ourselves
        tol = max(QUAD_ATOL, 10 * QUAD_RTOL * abs(val), 1e-6 * scale)
        if err > tol:
            raise QuadratureFailure(str(out[3]))
    return val


def _sphere_average(u, dim):
    """Average of cos(u * e . theta) over the unit sphere in R^dim."""
    if dim == 1:
        return np.cos(u)
    from scipy import special

    nu_ord = dim / 2 - 1
    u = np.asarray(u, float)
    out = np.where(
        np.abs(u) < 1e-8,
        1.0 - u**2 / (2 * dim),
        special.gamma(dim / 2) * (2.0 / np.maximum(np.abs(u), 1e-300)) ** nu_ord
        * special.jv(nu_ord, np.abs(u)),
    )
    return out


def eval_exponent(triplet: LevyTriplet, xi):
    """Characteristic exponent psi(xi) of a Levy triplet, by quadrature.

    The jump integral is split at |y| = 1 (the compensation cutoff); the
    region below 1 is integrated in log radius where the compensated
    integrand decays like |y|^2 near the origin.
    """
    scalar = np.ndim(xi) == 0
    xi = np.atleast_1d(np.asarray(xi, float))
    d = triplet.dim
    if xi.shape[-1] != d and not (d == 1 and xi.ndim == 1):
        raise ValueError("xi has wrong dimension")
    if d == 1:
        xi_vec = xi.reshape(-1)
        out = np.empty(xi_vec.shape, complex)
        for i, x in enumerate(xi_vec):
            out[i] = _exponent_1d(triplet, float(x))
        return complex(out[0]) if scalar else out
    return _exponent_isotropic(triplet, np.asarray(xi, float))


def _exponent_1d(triplet: LevyTriplet, xi):
    if xi < 0.0:
        return np.conj(_exponent_1d(triplet, -xi))
    m = triplet.measure
    b = float(triplet.b[0])
    val = -1j * b * xi
    if triplet.Q is not None:
        val += 0.5 * float(triplet.Q[0, 0]) * xi**2
    if xi == 0.0:
        return complex(0.0)
    w_neg, w_pos = m.side_weights
    for s_atom, mass in m.atoms:
        u = s_atom * xi
        comp = 1j * s_atom * xi if s_atom < 1.0 else 0.0
        val += mass * (
            1.0
            - (w_pos * np.exp(1j * u) + w_neg * np.exp(-1j * u))
            + comp * (w_pos - w_neg)
        )
    rho = m.radial_density
    if rho is None:
        return complex(val)
    lo, hi = m.support
    lo = max(lo, 1e-300)
    split = min(1.0, hi)
    skewed = abs(w_pos - w_neg) > 1e-15

    # |y| <= 1, real part.  Integrating 1 - cos(s xi) against the density is
    # rewritten by parts through the truncated second moment T, which is
    # bounded and captures arbitrarily small scales without overflow:
    #   int_0^a (1-cos(s xi)) rho(s) ds
    #     = (1-cos(a xi)) T(a)/a^2 + int_0^a T(s) xi^2 B(s xi)/(s xi)^2 ds
    # with B(w) = 2(1-cos w) - w sin w = O(w^4) near 0.  The cut a is a few
    # oscillation periods; beyond it Fourier-weight quadrature takes over.
    s_cut = min(split, 4.0 * np.pi / xi)
    a = s_cut
    wa = a * xi
    val += 2.0 * np.sin(wa / 2.0) ** 2 * float(m.trunc2(a)) / a**2
    u_hi = np.log(a)
    u_lo = max(np.log(lo), u_hi - 80.0)

    def re_parts(u):
        s = np.exp(u)
        w = s * xi
        if w < 0.25:
            # series of (2(1-cos w) - w sin w)/w^2, accurate to ~1e-9 here;
            # the direct difference cancels catastrophically below w ~ 1e-2
            bracket_over_w2 = w * w / 12.0 * (1.0 - w * w / 15.0 + w**4 / 560.0)
        else:
            bracket_over_w2 = (4.0 * np.sin(w / 2.0) ** 2 - w * np.sin(w)) / (w * w)
        return float(m.trunc2(s)) * xi * xi * bracket_over_w2

    val += _quad(re_parts, u_lo, u_hi)

    if skewed:
        # imaginary compensated part, density form in log radius with the
        # bounded fraction (w - sin w)/w^3; scales below the cut are
        # negligible for the power-law skewed measures this serves.
        v_lo = max(np.log(lo), u_hi - 180.0)

        def im_small(u):
            s = np.exp(u)
            w = s * xi
            if w < 0.25:
                frac = (1.0 - w * w / 20.0 + w**4 / 840.0) / 6.0
            else:
                frac = (w - np.sin(w)) / w**3
            return frac * xi**3 * rho(s) * s**4

        val += 1j * (w_pos - w_neg) * _quad(im_small, v_lo, u_hi)

    if s_cut < split:
        shell = float(m._continuous_tail(s_cut)) - float(m._continuous_tail(split))
        val += shell
        val -= _quad(rho, s_cut, split, weight="cos", wvar=xi, scale=shell)
        if skewed:
            lin = _quad(lambda s: s * rho(s), s_cut, split)
            osc = _quad(rho, s_cut, split, weight="sin", wvar=xi, scale=shell)
            val += 1j * (w_pos - w_neg) * (xi * lin - osc)

    # |y| > 1: uncompensated tail, oscillatory part via Fourier weights.
    if hi > 1.0:
        mass = float(m._continuous_tail(1.0))
        val += mass
        top = hi if np.isfinite(hi) else np.inf
        osc_re = _quad(rho, 1.0, top, weight="cos", wvar=xi, scale=mass)
        val -= osc_re
        if skewed:
            osc_im = _quad(rho, 1.0, top, weight="sin", wvar=xi, scale=mass)
            val -= 1j * (w_pos - w_neg) * osc_im
    return complex(val)


def _exponent_isotropic(triplet: LevyTriplet, xi):
    """psi for an isotropic measure in dimension d >= 2 (real jump part)."""
    m = triplet.measure
    xi = np.atleast_2d(xi)
    mags = np.linalg.norm(xi, axis=-1)
    out = np.asarray(-1j * (xi @ triplet.b), complex)
    if triplet.Q is not None:
        out += 0.5 * np.einsum("md,de,me->m", xi, triplet.Q, xi)
    rho = m.radial_density
    if rho is None:
        return out
    lo = max(m.support[0], 1e-300)
    hi = m.support[1]
    lo = max(lo, 1e-60)  # power-law mass below this is negligible at d >= 2
    for i, r_xi in enumerate(mags):
        if r_xi == 0.0:
            continue
        s_cut = min(hi, 4.0 * np.pi / r_xi)

        def integrand(u):
            s = np.exp(u)
            w = s * r_xi
            if w < 1e-6:
                frac = 1.0 / (2.0 * m.dim)
            else:
                frac = (1.0 - _sphere_average(w, m.dim)) / (w * w)
            return frac * r_xi**2 * rho(s) * s**3

        u_top = np.log(s_cut)
        u_lo = max(np.log(lo), u_top - 160.0)
        out[i] += _quad(integrand, u_lo, u_top)
        if s_cut < hi:
            shell = float(m._continuous_tail(s_cut))
            if np.isfinite(hi):
                shell -= float(m._continuous_tail(hi))
            out[i] += shell
            out[i] -= _half_period_sum(
                lambda s: _sphere_average(s * r_xi, m.dim) * rho(s),
                s_cut, hi, np.pi / r_xi, scale=shell,
            )
    return out


def _half_period_sum(fun, a, b, period, scale, max_chunks=5000):
    """Integral of a decaying oscillatory function by half-period chunks.

    Fixed-order Gauss quadrature per chunk; the alternating chunk sums
    converge, and summation stops once chunks are negligible against scale.
    """
    x_ref, w_ref = np.polynomial.legendre.leggauss(16)
    total, lo, k = 0.0, a, 0
    while lo < b and k < max_chunks:
        hi_k = min(lo + period, b)
        t = 0.5 * (hi_k - lo) * x_ref + 0.5 * (lo + hi_k)
        chunk = 0.5 * (hi_k - lo) * float(w_ref @ np.asarray(fun(t), float))
        total += chunk
        if k > 4 and abs(chunk) < 1e-10 * max(scale, 1e-300):
            break
        lo, k = hi_k, k + 1
    return total


# ---------------------------------------------------------------------------
# grids and extrema
# ---------------------------------------------------------------------------


def _directions(dim, n=32):
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        th = np.linspace(0, 2 * np.pi, n, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    # Fibonacci-style spread, deterministic
    idx = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * idx / n)
    theta = np.pi * (1 + 5**0.5) * idx
    pts = np.stack(
        [np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], axis=1
    )
    if dim == 3:
        return pts
    rng = np.random.default_rng(12345)
    extra = rng.standard_normal((n, dim))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    return extra


def xi_grid(radius, dim, n_radii=64, n_dirs=32, decades=4.0):
    """Deterministic frequency grid filling the ball |xi| <= radius."""
    radii = np.logspace(np.log10(radius) - decades, np.log10(radius), n_radii)
    dirs = _directions(dim, n_dirs)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, dim), radii, dirs


def ball_grid(center, radius, dim, n=17):
    """Deterministic grid over the closed ball B(center, radius)."""
    center = np.atleast_1d(np.asarray(center, float))
    if radius == 0:
        return center[None, :]
    if dim == 1:
        return (center[0] + radius * np.linspace(-1.0, 1.0, n))[:, None]
    dirs = _directions(dim, max(8, n // 2))
    radii = np.linspace(0.0, radius, 5)[1:]
    pts = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, dim) + center
    return np.vstack([center[None, :], pts])


def psi_star(spec: ProcessSpec, x, r, n_radii=64, n_dirs=32):
    """sup of Re q(x, .) over the ball |xi| <= r, on a refined log grid."""
    if r <= 0:
        raise ValueError("r must be positive")
    grid, radii, dirs = xi_grid(r, spec.dim, n_radii, n_dirs)
    vals = np.real(spec.q(x, grid)).reshape(len(radii), len(dirs))
    best = float(vals.max(initial=0.0))
    j = int(np.unravel_index(np.argmax(vals), vals.shape)[0])
    lo = radii[max(j - 1, 0)]
    hi = radii[min(j + 1, len(radii) - 1)]
    if hi > lo:
        fine = np.logspace(np.log10(lo), np.log10(hi), 17)
        grid2 = (fine[:, None, None] * dirs[None, :, :]).reshape(-1, spec.dim)
        best = max(best, float(np.real(spec.q(x, grid2)).max(initial=0.0)))
    return max(best, 0.0)


_EXTREMUM_MODES = {
    "sup_sup": ("sup", "abs"),
    "sup_sup_abs": ("sup", "abs"),
    "inf_sup": ("inf", "abs"),
    "inf_sup_re": ("inf", "re"),
    "sup_inf_re": ("swap", "re"),
}


def symbol_extremum(spec: ProcessSpec, x, ball_radius, xi_radius, mode="sup_sup",
                    n_z=17, n_radii=48, n_dirs=32):
    """Extremum of the symbol over B(x, ball_radius) x {|xi| <= xi_radius}.

    Modes: sup_sup / sup_sup_abs (sup_z sup_xi |q|), inf_sup (inf_z sup_xi |q|),
    inf_sup_re (inf_z sup_xi Re q), sup_inf_re (sup_xi inf_z Re q — the order
    used by the symbol-based exit bound).  For a Levy process the z-extremum
    collapses.
    """
    if xi_radius <= 0:
        raise ValueError("xi_radius must be positive")
    if ball_radius < 0:
        raise ValueError("ball_radius must be non-negative")
    try:
        z_kind, val_kind = _EXTREMUM_MODES[mode]
    except KeyError:
        raise ValueError(f"unknown extremum mode {mode!r}") from None
    grid, radii, dirs = xi_grid(xi_radius, spec.dim, n_radii, n_dirs)
    if spec.kind == "levy" or ball_radius == 0:
        z_points = np.atleast_1d(np.asarray(x, float))[None, :]
    else:
        z_points = ball_grid(x, ball_radius, spec.dim, n_z)
    table = np.empty((z_points.shape[0], grid.shape[0]))
    for i, z in enumerate(z_points):
        q = spec.q(z, grid)
        table[i] = np.abs(q) if val_kind == "abs" else np.real(q)
    if z_kind == "swap":
        return float(table.min(axis=0).max(initial=0.0))
    per_z = table.max(axis=1)
    return float(per_z.max() if z_kind == "sup" else per_z.min())


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------


@dataclass
class ConditionReport:
    """Outcome of a structural condition check with its numeric evidence."""

    verdict: str  # "holds" | "fails" | "indeterminate"
    witness: float
    grid: np.ndarray = field(default_factory=lambda: np.array([]))
    reason: str = ""
    shortcut: bool = False

    @property
    def holds(self):
        return self.verdict == "holds"

    @property
    def fails(self):
        return self.verdict == "fails"


def tail_trend(grid, values, stability=0.10, slope_min=0.02, growth_min=1.5,
               blowup=1e3):
    """Classify the limiting trend of ``values`` along ``grid``.

    ``grid`` must be ordered so that increasing index approaches the limit
    (e.g. radii decreasing to 0).  Returns (label, estimate) with label in
    {"stable", "diverging", "indeterminate"}; the estimate is the extremum of
    the last half of the values.  Stability means the last-half values vary by
    less than ``stability`` relatively; divergence means a positive log-log
    slope with real growth, or exceeding ``blowup``.
    """
    values = np.asarray(values, float)
    grid = np.asarray(grid, float)
    half = values[len(values) // 2:]
    gh = grid[len(values) // 2:]
    hi, lo = float(np.max(half)), float(np.min(half))
    if hi <= 0:
        return "stable", 0.0
    if lo > 0 and hi / lo - 1.0 < stability:
        return "stable", hi
    if hi > blowup:
        return "diverging", hi
    pos = half > 0
    if pos.sum() >= 3:
        lx = np.log(np.abs(gh[pos]))
        ly = np.log(half[pos])
        slope = np.polyfit(lx, ly, 1)[0]
        # orient: does the value grow as the grid approaches its limit?
        toward_limit = np.sign(lx[-1] - lx[0])
        slope *= toward_limit
        if slope > slope_min and half[-1] > growth_min * half[0] > 0:
            return "diverging", hi
    return "indeterminate", hi


def sector_check(spec: ProcessSpec, x_ball=(0.0, 0.0), xi_radii=None, n_dirs=32,
                 n_z=9):
    """Check |Im q| <= C Re q on a ball of states times a frequency grid.

    Holds with witness C* (the largest observed ratio) when the ratio is
    stable over the top frequency decades; fails when Re q vanishes where
    Im q does not, or when the ratio keeps growing along the grid.
    """
    center, radius = x_ball
    if xi_radii is None:
        xi_radii = np.logspace(-2, 6, 49)
    xi_radii = np.asarray(xi_radii, float)
    if xi_radii.min() <= 0:
        raise ValueError("frequency grid must exclude 0")
    dirs = _directions(spec.dim, n_dirs)
    z_points = ball_grid(center, radius, spec.dim, n_z)
    ratio_by_level = np.zeros(len(xi_radii))
    any_nonzero = False
    hard_fail = False
    for z in z_points:
        grid = (xi_radii[:, None, None] * dirs[None, :, :]).reshape(-1, spec.dim)
        q = spec.q(z, grid).reshape(len(xi_radii), len(dirs))
        re, im = np.real(q), np.abs(np.imag(q))
        nz = (re > 0) | (im > 0)
        any_nonzero |= bool(nz.any())
        bad = (re <= 0) & (im > 1e-12)
        if bad.any():
            hard_fail = True
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(re > 0, im / re, 0.0)
        ratio_by_level = np.maximum(ratio_by_level, ratios.max(axis=1))
    if not any_nonzero:
        raise DegenerateSymbol("symbol vanishes on the whole grid")
    if hard_fail:
        return ConditionReport(
            "fails", float(np.inf), xi_radii, reason="Re q = 0 where Im q > 0"
        )
    label, est = tail_trend(xi_radii, ratio_by_level)
    if label == "stable":
        return ConditionReport("holds", est, xi_radii)
    if label == "diverging":
        return ConditionReport("fails", est, xi_radii, reason="ratio diverges")
    return ConditionReport("indeterminate", est, xi_radii, reason="unstable ratio")


def validate_symbol(spec: ProcessSpec, x_points=None, xi_points=None, slack=1e-12):
    """Assert q(x,0)=0, Hermitian symmetry, Re q >= 0, and the doubling bound."""
    if x_points is None:
        x_points = [np.zeros(spec.dim), 0.3 * np.ones(spec.dim)]
    if xi_points is None:
        base, _, _ = xi_grid(10.0, spec.dim, n_radii=12, n_dirs=8)
        xi_points = base
    xi_points = np.atleast_2d(xi_points)
    for x in x_points:
        q0 = spec.q(x, np.zeros((1, spec.dim)))
        if abs(q0[0]) > 1e-9:
            raise AssertionError(f"q(x,0) = {q0[0]} != 0")
        q_plus = spec.q(x, xi_points)
        q_minus = spec.q(x, -xi_points)
        if not np.allclose(q_minus, np.conj(q_plus), rtol=1e-7, atol=1e-9):
            raise AssertionError("symbol is not Hermitian in xi")
        if np.any(np.real(q_plus) < -1e-10):
            raise AssertionError("Re q < 0 on the grid")
        q_double = spec.q(x, 2 * xi_points)
        if np.any(np.abs(q_double) > 4 * np.abs(q_plus) + slack):
            raise AssertionError("doubling bound |q(2 xi)| <= 4 |q(xi)| violated")
    return True


def psi_star_h_constant(spec: ProcessSpec, measure: LevyMeasureModel, r_grid=None):
    """Fit the single constant c with h(r)/c <= psi*(1/r) <= c h(r) on a grid."""
    if r_grid is None:
        r_grid = np.logspace(-4, -1, 13)
    cs = []
    for r in r_grid:
        h = measure.concentration(r).h
        p = psi_star(spec, np.zeros(spec.dim), 1.0 / r)
        if h <= 0 or p <= 0:
            continue
        cs.append(max(p / h, h / p))
    if not cs:
        raise ValueError("no usable grid points for the equivalence constant")
    return float(max(cs))
