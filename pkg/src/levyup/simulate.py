"""Monte Carlo path generation and empirical verification of exit-time bounds.

Schemes
-------
exact_stable            increments drawn exactly for symmetric stable laws
compound_poisson_gauss  jumps above a cutoff as compound Poisson, smaller
                        jumps as a Gaussian surrogate matching the truncated
                        second moment, drift recentred to the |y| < 1 cutoff
euler_sde               X_{k+1} = X_k + sigma(X_k) dL with pre-drawn driver
                        increments
freeze_symbol           one increment of the Levy process frozen at the
                        current state

Randomness is counter-based: path p of a run with seed s draws from
Philox(key = s * 2^64 + p), so parallel and serial execution agree and
identical (config, model) inputs give identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import RateOverflow
from .symbols import LevyTriplet, ProcessSpec

_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    delta_jump: float | None = None  # None: sqrt(dt) clamped to [1e-4, 1e-1]
    n_paths: int = 1000
    seed: int = 0
    scheme: str = "auto"
    path_offset: int = 0  # global index of the first path (for chunked runs)

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.delta_jump is not None and self.delta_jump <= 0:
            raise ValueError("delta_jump must be positive")
        if self.n_paths < 1:
            raise ValueError("n_paths must be at least 1")

    def delta_for(self, dt):
        if self.delta_jump is not None:
            return self.delta_jump
        return float(np.clip(np.sqrt(dt), 1e-4, 1e-1))

    def rng_for(self, p):
        return path_rng(self.seed, self.path_offset + p)


@dataclass
class PathSample:
    """One trajectory on a fixed grid with its running-maximum profile.

    ``runmax`` absorbs the pre-jump position inside each step, so it can
    exceed max(runmax[k-1], |values[k] - start|) when a large jump swings the
    path out and back within one step.
    """

    times: np.ndarray
    values: np.ndarray
    start: np.ndarray
    runmax: np.ndarray


@dataclass
class McEstimate:
    p_hat: float
    ci_half_width: float
    n_paths: int
    kind: str = "probability"

    @property
    def lower(self):
        if self.kind == "probability":
            return max(self.p_hat - self.ci_half_width, 0.0)
        return self.p_hat - self.ci_half_width

    @property
    def upper(self):
        if self.kind == "probability":
            return min(self.p_hat + self.ci_half_width, 1.0)
        return self.p_hat + self.ci_half_width


def path_rng(seed, path_index):
    """Counter-based generator for one path; independent across indices."""
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) + int(path_index)))


def proportion_estimate(hits, n):
    """99% interval for a Bernoulli proportion; Wilson when counts are scarce."""
    hits = int(hits)
    p = hits / n
    if min(hits, n - hits) < 10:
        z2 = _Z99**2
        centre = (p + z2 / (2 * n)) / (1 + z2 / n)
        half = _Z99 * np.sqrt(p * (1 - p) / n + z2 / (4 * n**2)) / (1 + z2 / n)
        return McEstimate(p_hat=p, ci_half_width=float(half + abs(centre - p)),
                          n_paths=n)
    half = _Z99 * np.sqrt(p * (1 - p) / n)
    return McEstimate(p_hat=p, ci_half_width=float(half), n_paths=n)


def mean_estimate(sample):
    sample = np.asarray(sample, float)
    n = sample.size
    half = _Z99 * sample.std(ddof=1) / np.sqrt(n) if n > 1 else np.inf
    return McEstimate(p_hat=float(sample.mean()), ci_half_width=float(half),
                      n_paths=n, kind="mean")


# ---------------------------------------------------------------------------
# increment sampling
# ---------------------------------------------------------------------------


def _cms_symmetric(u, w, alpha):
    """Symmetric stable draw with exponent |xi|^alpha from (uniform, exp) pairs."""
    alpha = np.asarray(alpha, float)
    su = np.sin(alpha * u)
    cu = np.cos(u) ** (1.0 / alpha)
    rest = (np.cos((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha)
    return su / cu * rest


def stable_draws(rng, alpha, size, sigma=1.0):
    u = rng.uniform(-np.pi / 2, np.pi / 2, size)
    w = rng.standard_exponential(size)
    return sigma * _cms_symmetric(u, w, alpha)


def _levy_parts(triplet: LevyTriplet, dts, delta, rng, rate_cap=1e4):
    """Continuous and jump increments of a 1-d Levy triplet on step sizes dts.

    Returns (continuous, jumps) arrays; ``continuous`` holds drift (recentred
    to the cutoff delta), the Gaussian part, and the small-jump surrogate;
    ``jumps`` holds the compound-Poisson sums of jumps above delta.
    """
    m = triplet.measure
    dts = np.asarray(dts, float)
    delta = min(float(delta), 1.0)
    rate = float(m.tail(delta))
    if np.any(rate * dts > rate_cap):
        raise RateOverflow(
            "jump rate times step exceeds the cap; decrease dt or raise delta"
        )
    b_eff = float(triplet.b[0]) - m.mean_jump_between(delta, 1.0)
    var = float(m.trunc2(delta))
    if triplet.Q is not None:
        var += float(triplet.Q[0, 0])
    cont = b_eff * dts + np.sqrt(var * dts) * rng.standard_normal(dts.shape)
    counts = rng.poisson(rate * dts)
    jumps = np.zeros_like(dts)
    total = int(counts.sum())
    if total:
        sizes = m.sample_jumps(total, delta, rng)
        jumps = _segment_sums(sizes, counts)
    return cont, jumps


def _segment_sums(values, counts):
    out = np.zeros(len(counts))
    idx = np.repeat(np.arange(len(counts)), counts)
    np.add.at(out, idx, values)
    return out


def sample_increment(triplet: LevyTriplet, dt, delta, rng):
    """One increment of a Levy triplet over dt with jump cutoff delta.

    Composition: recentred drift + Gaussian part + Gaussian small-jump
    surrogate with variance dt * trunc2(delta) + compound-Poisson sum of
    jumps above delta at rate tail(delta).
    """
    if dt <= 0 or not 0 < delta <= 1:
        raise ValueError("need dt > 0 and delta in (0, 1]")
    cont, jumps = _levy_parts(triplet, np.array([dt]), delta, rng)
    return float(cont[0] + jumps[0])


# ---------------------------------------------------------------------------
# batch path engines (1-d)
# ---------------------------------------------------------------------------


def _resolve_scheme(spec: ProcessSpec, config: SimConfig):
    if config.scheme != "auto":
        return config.scheme
    if spec.kind == "levy":
        return "exact_stable" if spec.stable_family else "compound_poisson_gauss"
    if spec.kind == "sde":
        return "euler_sde"
    return "freeze_symbol"


def simulate_batch(spec: ProcessSpec, x, times, config: SimConfig):
    """Simulate n_paths trajectories on a fixed grid; returns (values, runmax).

    ``times`` must start at 0 and increase.  Arrays have shape
    (n_paths, len(times)); runmax tracks sup_{s <= t_k} |X_s - x| including
    the within-step pre-jump point for jump-decomposed schemes.
    """
    times = np.asarray(times, float)
    if times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must start at 0 and be strictly increasing")
    if spec.dim != 1:
        raise NotImplementedError("path simulation is implemented in dimension 1")
    scheme = _resolve_scheme(spec, config)
    dts = np.diff(times)
    n, k = config.n_paths, len(dts)
    x0 = float(np.atleast_1d(np.asarray(x, float))[0])

    if scheme == "exact_stable":
        if spec.kind != "levy" or spec.stable_family is None:
            raise ValueError("exact_stable needs a Levy process with stable law")
        alpha, sigma = spec.stable_family
        drift = float(spec.levy.b[0])
        values = np.empty((n, k + 1))
        values[:, 0] = x0
        for p in range(n):
            rng = config.rng_for(p)
            inc = stable_draws(rng, alpha, k, sigma) * dts ** (1.0 / alpha)
            values[p, 1:] = x0 + np.cumsum(inc + drift * dts)
        runmax = np.maximum.accumulate(np.abs(values - x0), axis=1)
        return values, runmax

    if scheme == "compound_poisson_gauss":
        if spec.kind != "levy":
            raise ValueError("compound_poisson_gauss needs a Levy process")
        values = np.empty((n, k + 1))
        prejump = np.empty((n, k))
        delta = config.delta_for(float(np.median(dts)))
        for p in range(n):
            rng = config.rng_for(p)
            cont, jumps = _levy_parts(spec.levy, dts, delta, rng)
            cum_cont = np.cumsum(cont)
            cum_jump = np.cumsum(jumps)
            values[p, 0] = x0
            values[p, 1:] = x0 + cum_cont + cum_jump
            prejump[p] = x0 + cum_cont + cum_jump - jumps
        step_max = np.maximum(np.abs(values[:, 1:] - x0), np.abs(prejump - x0))
        runmax = np.empty_like(values)
        runmax[:, 0] = 0.0
        runmax[:, 1:] = np.maximum.accumulate(step_max, axis=1)
        return values, runmax

    if scheme == "euler_sde":
        if spec.kind != "sde":
            raise ValueError("euler_sde needs an SDE specification")
        driver = spec.driver
        drv_spec = ProcessSpec(kind="levy", dim=1, symbol=spec.symbol,
                               levy=driver, stable_family=spec.stable_family)
        cont_all = np.empty((n, k))
        jump_all = np.empty((n, k))
        if spec.stable_family is not None:
            alpha, sigma = spec.stable_family
            for p in range(n):
                rng = config.rng_for(p)
                cont_all[p] = stable_draws(rng, alpha, k, sigma) * dts ** (1.0 / alpha) \
                    + float(driver.b[0]) * dts
                jump_all[p] = 0.0
        else:
            delta = config.delta_for(float(np.median(dts)))
            for p in range(n):
                rng = config.rng_for(p)
                cont_all[p], jump_all[p] = _levy_parts(driver, dts, delta, rng)
        values = np.empty((n, k + 1))
        values[:, 0] = x0
        runmax = np.zeros((n, k + 1))
        state = np.full(n, x0)
        run = np.zeros(n)
        for j in range(k):
            s = np.asarray(spec.sigma(state), float)
            pre = state + s * cont_all[:, j]
            run = np.maximum(run, np.abs(pre - x0))
            state = pre + s * jump_all[:, j]
            run = np.maximum(run, np.abs(state - x0))
            values[:, j + 1] = state
            runmax[:, j + 1] = run
        return values, runmax

    if scheme == "freeze_symbol":
        if spec.kind != "state_dependent":
            raise ValueError("freeze_symbol needs a state-dependent process")
        fam = spec.family
        values = np.empty((n, k + 1))
        values[:, 0] = x0
        runmax = np.zeros((n, k + 1))
        if fam.stable_params is not None:
            u_all = np.empty((n, k))
            w_all = np.empty((n, k))
            for p in range(n):
                rng = config.rng_for(p)
                u_all[p] = rng.uniform(-np.pi / 2, np.pi / 2, k)
                w_all[p] = rng.standard_exponential(k)
            state = np.full(n, x0)
            run = np.zeros(n)
            for j in range(k):
                alpha, sigma = fam.stable_params(state)
                inc = sigma * _cms_symmetric(u_all[:, j], w_all[:, j], alpha)
                state = state + inc * dts[j] ** (1.0 / alpha)
                run = np.maximum(run, np.abs(state - x0))
                values[:, j + 1] = state
                runmax[:, j + 1] = run
            return values, runmax
        # generic freeze: step-wise compound Poisson + Gaussian per state
        delta = config.delta_for(float(np.median(dts)))
        rngs = [config.rng_for(p) for p in range(n)]
        state = np.full(n, x0)
        run = np.zeros(n)
        for j in range(k):
            for p in range(n):
                frozen = fam.freeze(state[p])
                state[p] += sample_increment(frozen.levy, dts[j], delta, rngs[p])
            run = np.maximum(run, np.abs(state - x0))
            values[:, j + 1] = state
            runmax[:, j + 1] = run
        return values, runmax

    raise ValueError(f"unknown scheme {scheme!r}")


def simulate_path(spec: ProcessSpec, x, T, config: SimConfig):
    """One trajectory on the uniform grid of step config.dt up to T."""
    n_steps = max(int(np.ceil(T / config.dt)), 1)
    times = np.linspace(0.0, T, n_steps + 1)
    one = replace(config, n_paths=1)
    values, runmax = simulate_batch(spec, x, times, one)
    return PathSample(times=times, values=values[0],
                      start=np.atleast_1d(np.asarray(x, float)),
                      runmax=runmax[0])


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------


def _grid_to(T, dt):
    n_steps = max(int(np.ceil(T / dt)), 1)
    return np.linspace(0.0, T, n_steps + 1)


def _batched_runmax(spec, x, times, config, chunk=2000, want_values=False):
    """Run the batch in chunks; per-path streams stay tied to global indices,
    so the result is identical to one unchunked call."""
    vals_parts, run_parts = [], []
    done = 0
    while done < config.n_paths:
        m = min(chunk, config.n_paths - done)
        sub = replace(config, n_paths=m,
                      path_offset=config.path_offset + done)
        v, r = simulate_batch(spec, x, times, sub)
        run_parts.append(r)
        if want_values:
            vals_parts.append(v)
        done += m
    runmax = np.vstack(run_parts)
    values = np.vstack(vals_parts) if want_values else None
    return values, runmax


def estimate_exit_survival(spec: ProcessSpec, x, r, t_grid, config: SimConfig):
    """Per-t estimates of P(first exit from B(x, r) happens at or after t).

    The event is read from the running maximum: survival at t means
    sup_{s < t} |X_s - x| < r on the simulation grid.
    """
    t_grid = np.asarray(t_grid, float)
    if r <= 0:
        raise ValueError("r must be positive")
    times = _grid_to(float(t_grid.max()), config.dt)
    _, runmax = _batched_runmax(spec, x, times, config)
    out = []
    for t in t_grid:
        if t == 0.0:
            out.append(McEstimate(1.0, 0.0, config.n_paths))
            continue
        idx = max(int(np.searchsorted(times, t + 1e-15)) - 1, 0)
        hits = int(np.sum(runmax[:, idx] < r))
        out.append(proportion_estimate(hits, config.n_paths))
    return out


def mc_event_probability(spec: ProcessSpec, x, event, config: SimConfig):
    """Probability of a path event; event = (kind, t, r) with kind one of
    "runmax_at_least" (sup_{s<=t} |X_s - x| >= r) or "abs_at_least"
    (|X_t - x| >= r)."""
    kind, t, r = event
    if t <= 0 or r <= 0:
        raise ValueError("event parameters must be positive")
    times = _grid_to(float(t), config.dt)
    values, runmax = _batched_runmax(spec, x, times, config, want_values=True)
    x0 = float(np.atleast_1d(np.asarray(x, float))[0])
    if kind == "runmax_at_least":
        hits = int(np.sum(runmax[:, -1] >= r))
    elif kind == "abs_at_least":
        hits = int(np.sum(np.abs(values[:, -1] - x0) >= r))
    else:
        raise ValueError(f"unknown event kind {kind!r}")
    return proportion_estimate(hits, config.n_paths)


def exit_times_from_runmax(times, runmax, r):
    """First grid time with runmax >= r; censored paths return times[-1]."""
    exceed = runmax >= r
    first = np.argmax(exceed, axis=1)
    never = ~exceed.any(axis=1)
    out = times[first]
    out[never] = times[-1]
    return out, never


@dataclass
class BoundRow:
    t: float
    r: float
    empirical: float
    ci: float
    bound: float
    violated: bool


def verify_bound_table(spec: ProcessSpec, x, bound_kind, grid, config: SimConfig,
                       c_standin=None, c_lower=0.5, settings=None):
    """Empirical check of one exit-time bound over a (t, r) grid.

    bound_kind: "exit_survival" (P(tau_r >= t) <= 1/(1 + t G(x,2r))),
    "expected_exit" (E tau_r <= 1/G(x,2r); the t column is unused),
    "lower_max" (P(runmax > r) >= (1-c) t G(x,2r) wherever the empirical
    probability is at most c_lower), or "max_ineq" (P(runmax >= r) <=
    c_standin * t * sup-sup |q|; the stand-in constant is reported, not
    asserted).  A row is violated when the empirical value beats the bound
    by more than three half-widths of its 99% interval.
    """
    from .criteria import DEFAULTS as _D, ball_tail_intensity

    settings = settings or _D
    t_vals = sorted({float(t) for t, _ in grid})
    r_vals = sorted({float(r) for _, r in grid})
    rows = []

    if bound_kind == "expected_exit":
        for r in r_vals:
            g2r = ball_tail_intensity(spec, x, 2 * r, settings)
            horizon = 8.0 / g2r if g2r > 0 else 1.0
            times = _grid_to(horizon, config.dt)
            _, runmax = _batched_runmax(spec, x, times, config)
            taus, censored = exit_times_from_runmax(times, runmax, r)
            est = mean_estimate(taus)
            bound = np.inf if g2r == 0 else 1.0 / g2r
            rows.append(BoundRow(
                t=float(horizon), r=r, empirical=est.p_hat, ci=est.ci_half_width,
                bound=bound, violated=bool(est.p_hat > bound + 3 * est.ci_half_width),
            ))
        return rows

    t_max = max(t_vals)
    times = _grid_to(t_max, config.dt)
    _, runmax = _batched_runmax(spec, x, times, config)
    for t, r in grid:
        t, r = float(t), float(r)
        idx = int(np.searchsorted(times, t + 1e-15)) - 1
        g2r = ball_tail_intensity(spec, x, 2 * r, settings)
        if bound_kind == "exit_survival":
            hits = int(np.sum(runmax[:, idx] < r))
            est = proportion_estimate(hits, config.n_paths)
            bound = 1.0 / (1.0 + t * g2r)
            violated = est.p_hat > bound + 3 * est.ci_half_width
        elif bound_kind == "lower_max":
            hits = int(np.sum(runmax[:, idx] > r))
            est = proportion_estimate(hits, config.n_paths)
            if est.p_hat > c_lower:
                continue  # outside the regime of the lower bound
            bound = min((1.0 - c_lower) * t * g2r, 1.0)
            violated = est.p_hat < bound - 3 * est.ci_half_width
        elif bound_kind == "max_ineq":
            from .symbols import symbol_extremum

            hits = int(np.sum(runmax[:, idx] >= r))
            est = proportion_estimate(hits, config.n_paths)
            supsup = symbol_extremum(spec, x, r, 1.0 / r, "sup_sup")
            bound = (c_standin if c_standin is not None else 1.0) * t * supsup
            violated = est.p_hat > bound + 3 * est.ci_half_width
        else:
            raise ValueError(f"unknown bound kind {bound_kind!r}")
        rows.append(BoundRow(t=t, r=r, empirical=est.p_hat,
                             ci=est.ci_half_width, bound=float(bound),
                             violated=bool(violated)))
    return rows
