"""Per-frequency integration of the reduced system and energy diagnostics.

The Fourier-transformed reduced system D_t V = (calA + calB) V is integrated
with fixed-step RK4 (d/dt V = i (calA + calB) V).  Along the trajectory the
module measures the quasi-symmetriser energy E = (Q_lift V | V), the three
summands of its growth inequality, frequency-growth exponents over xi sweeps,
and solves the original 1-d Cauchy problem end to end through the reduction.

Per-frequency runs are independent; aggregations iterate sweeps in a fixed
order so reports are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import ceil, log

import numpy as np

from hyposym.errors import DomainError, NumericError
from hyposym.pencils import hermitian_part
from hyposym.quasisym import build_Q_eps
from hyposym.reduction import (
    assemble_path,
    lift_trajectory,
    transform_initial_data,
)
from hyposym.symbols import (
    SystemSymbol,
    bracket,
    companion_roots,
    eval_symbol_path,
    faddeev_leverrier,
)

ENERGY_FLOOR = 1e-280
RENORM_THRESHOLD = 1e120


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-step integration settings.

    ``t_step=None`` chooses the step per frequency as cfl_safety / <xi>
    (rounded so the horizon is an integer number of steps).  An explicit step
    must satisfy the same stiffness guard for the largest frequency it is
    used with.  ``eps_policy`` maps a frequency to the quasi-symmetriser
    parameter: ("fixed", value), ("inverse",) for <xi>^-1, or
    ("balanced", k) for <xi>^(-k / (2(m-1)+k)).
    """

    t_step: float | None = None
    cfl_safety: float = 0.05
    eps_policy: tuple = ("balanced", 2)
    xi_grid: tuple = ()
    renormalize: bool = False

    def __post_init__(self):
        if self.cfl_safety <= 0:
            raise DomainError("cfl_safety must be positive")
        if self.t_step is not None and self.t_step <= 0:
            raise DomainError("t_step must be positive")
        kind = self.eps_policy[0]
        if kind == "fixed":
            v = float(self.eps_policy[1])
            if not 0.0 < v <= 1.0:
                raise DomainError(f"fixed eps must lie in (0, 1], got {v}")
        elif kind == "inverse":
            pass
        elif kind == "balanced":
            if float(self.eps_policy[1]) < 1:
                raise DomainError("regularity parameter k must be >= 1")
        else:
            raise DomainError(f"unknown eps policy {kind!r}")

    def eps_for(self, m: int, xi) -> float:
        bxi = bracket(xi)
        kind = self.eps_policy[0]
        if kind == "fixed":
            return float(self.eps_policy[1])
        if kind == "inverse":
            return min(1.0, 1.0 / bxi)
        k = float(self.eps_policy[1])
        return min(1.0, bxi ** (-k / (2.0 * (m - 1) + k)))

    def steps_for(self, symbol: SystemSymbol, xi) -> tuple:
        """(N, h) with N h = T; enforces the stiffness guard h <= cfl/<xi>."""
        T = symbol.horizon
        limit = self.cfl_safety / bracket(xi)
        h = self.t_step if self.t_step is not None else limit
        if h > limit * (1.0 + 1e-12):
            raise DomainError(
                f"step {h} violates the stiffness guard {limit:.3e} at xi={xi}"
            )
        N = max(1, ceil(T / h - 1e-12))
        return N, T / N


@dataclass
class EnergyTrace:
    """Per-frequency time series of the reduced state and energy terms.

    ``V`` stores the (possibly renormalised) state; the true state is
    V * exp(log_scale[:, None]).  ``K`` is |(dQ/dt V|V)| / (Q V|V); ``term2``
    and ``term3`` are the commutator summands of the growth inequality;
    ``dtE`` is the centred difference of E.  All energy diagnostics refer to
    the stored state, so across a renormalisation step dtE carries a negative
    spike; ratios like K and term/E are scale-free.
    """

    ts: np.ndarray
    V: np.ndarray
    log_scale: np.ndarray
    xi: np.ndarray
    eps: float
    m: int
    E: np.ndarray | None = None
    K: np.ndarray | None = None
    term2: np.ndarray | None = None
    term3: np.ndarray | None = None
    dtE: np.ndarray | None = None
    coercivity_sup: float = float("nan")
    nonhyperbolic_points: int = 0
    inequality_residual: np.ndarray | None = field(default=None, repr=False)

    @property
    def growth_log(self) -> float:
        """sup_t log(|V(t)| / |V(0)|), renormalisation folded back in."""
        norms = np.linalg.norm(self.V, axis=1)
        base = log(max(norms[0], 1e-300)) + self.log_scale[0]
        with np.errstate(divide="ignore"):
            vals = np.where(norms > 0, np.log(np.maximum(norms, 1e-300)), -np.inf)
        return float((vals + self.log_scale).max() - base)


def _rk4_run(M_half, N: int, h: float, y0: np.ndarray, renormalize: bool):
    """RK4 with matrices sampled on the half-step grid (index 0..2N).

    ``M_half`` is either an array (2N+1, d, d) or a single constant matrix.
    Renormalisation keeps |y| <= RENORM_THRESHOLD, accumulating log scales so
    exponentially growing modes never overflow.
    """
    constant = M_half.ndim == 2
    y = np.asarray(y0, dtype=complex).copy()
    d = y.size
    out = np.empty((N + 1, d), dtype=complex)
    logs = np.zeros(N + 1)
    out[0] = y
    acc = 0.0
    # overflow surfaces through the isfinite guard, not a warning
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(N):
            if constant:
                M1 = M2 = M3 = M_half
            else:
                M1 = M_half[2 * k]
                M2 = M_half[2 * k + 1]
                M3 = M_half[2 * k + 2]
            k1 = M1 @ y
            k2 = M2 @ (y + (0.5 * h) * k1)
            k3 = M2 @ (y + (0.5 * h) * k2)
            k4 = M3 @ (y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if renormalize:
                nrm = float(np.linalg.norm(y))
                if nrm > RENORM_THRESHOLD:
                    y = y / nrm
                    acc += log(nrm)
            if not np.isfinite(y).all():
                raise NumericError(f"non-finite state at step {k + 1} of {N}")
            out[k + 1] = y
            logs[k + 1] = acc
    return out, logs


def direct_integrate(symbol: SystemSymbol, xi, u0hat, config: SolverConfig):
    """Oracle for the original system: integrates d/dt u-hat = i A(t, xi) u-hat.

    Returns (ts, trajectory) with trajectory shape (N + 1, m).
    """
    N, h = config.steps_for(symbol, xi)
    ts_half = np.linspace(0.0, symbol.horizon, 2 * N + 1)
    M_half = 1j * eval_symbol_path(symbol, ts_half, xi)
    u0 = np.asarray(u0hat, dtype=complex).ravel()
    if u0.size != symbol.m:
        raise DomainError(f"initial data must have {symbol.m} components")
    traj, _ = _rk4_run(M_half, N, h, u0, renormalize=False)
    return ts_half[::2], traj


def _rescaled_spectra_path(symbol: SystemSymbol, ts: np.ndarray, xi):
    """Eigenvalues of A_0 along the grid, ascending; plus non-hyperbolic count."""
    bxi = bracket(xi)
    A0 = eval_symbol_path(symbol, ts, xi) / bxi
    cs = faddeev_leverrier(A0)
    m = symbol.m
    lams = np.zeros((ts.size, m))
    nonhyp = 0
    for k in range(ts.size):
        roots = companion_roots(cs[k].real)
        roots = roots[np.argsort(roots.real, kind="stable")]
        radius = float(np.abs(roots).max(initial=0.0))
        if np.abs(roots.imag).max(initial=0.0) > 1e-8 * (1.0 + radius):
            nonhyp += 1
        lams[k] = roots.real
    return lams, nonhyp


def _energy_diagnostics(trace: EnergyTrace, symbol: SystemSymbol, calA, calB, eps: float):
    """Fill E, K, term2, term3, dtE and the coercivity constant in place.

    dQ/dt is taken by centred finite differences of the quasi-symmetriser
    entries (one-sided at the ends): the entries are polynomial in the
    eigenvalues and stay smooth through multiplicity crossings even when the
    individual eigenvalue branches do not.
    """
    ts, V = trace.ts, trace.V
    m = symbol.m
    xi = trace.xi
    bxi = bracket(xi)
    h = ts[1] - ts[0]
    lams, nonhyp = _rescaled_spectra_path(symbol, ts, xi)
    n = ts.size

    Q = np.empty((n, m, m))
    for k in range(n):
        Q[k] = build_Q_eps(lams[k], eps).Q_eps
    dQ = np.empty_like(Q)
    dQ[1:-1] = (Q[2:] - Q[:-2]) / (2.0 * h)
    dQ[0] = (Q[1] - Q[0]) / h
    dQ[-1] = (Q[-1] - Q[-2]) / h

    blocks = V.reshape(n, m, m)             # blocks[k, i] = band i of V(t_k)
    A0_blocks = calA[:, :m, :m] / bxi       # every band shares the same block

    def band_form(mat_stack):
        # sum over bands of v* (mat v) with a per-time m x m matrix stack
        prod = np.einsum("kab,kib->kia", mat_stack, blocks)
        return np.einsum("kia,kia->k", np.conj(blocks), prod)

    E = band_form(Q).real
    K_num = np.abs(band_form(dQ))
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(E > ENERGY_FLOOR, K_num / np.maximum(E, ENERGY_FLOOR), 0.0)

    comm2 = np.einsum("kab,kbc->kac", Q, A0_blocks) - np.einsum(
        "kab,kbc->kac", np.conj(np.swapaxes(A0_blocks, 1, 2)), Q
    )
    term2 = np.abs(bxi * band_form(comm2))

    term3 = np.empty(n)
    coercivity = 0.0
    eye = np.eye(m)
    for k in range(n):
        Qf = np.kron(eye, Q[k])
        B = calB[k]
        M3 = Qf @ B - B.conj().T @ Qf
        term3[k] = abs(np.vdot(V[k], M3 @ V[k]))
        eigs = np.linalg.eigvalsh(hermitian_part(Q[k]))
        lo, hi = eigs[0], eigs[-1]
        cm = hi if lo <= 0 else max(hi, eps ** (2 * (m - 1)) / lo)
        coercivity = max(coercivity, cm)

    dtE = np.empty(n)
    dtE[1:-1] = (E[2:] - E[:-2]) / (2.0 * h)
    dtE[0] = (E[1] - E[0]) / h
    dtE[-1] = (E[-1] - E[-2]) / h

    trace.E = E
    trace.K = K
    trace.term2 = term2
    trace.term3 = term3
    trace.dtE = dtE
    trace.coercivity_sup = float(coercivity)
    trace.nonhyperbolic_points = nonhyp


def reduced_integrate(symbol: SystemSymbol, xi, V0, config: SolverConfig,
                      collect_energy: bool = True, eps: float | None = None) -> EnergyTrace:
    """Integrate d/dt V = i (calA + calB) V and record energy diagnostics.

    ``V0`` is any complex vector of length m^2 (usually from
    :func:`hyposym.reduction.transform_initial_data`).  With
    ``config.renormalize`` the state is rescaled when it grows past
    RENORM_THRESHOLD; the accumulated log-scale is stored on the trace.
    """
    m = symbol.m
    V0 = np.asarray(V0, dtype=complex).ravel()
    if V0.size != m * m:
        raise DomainError(f"reduced state must have {m * m} components")
    N, h = config.steps_for(symbol, xi)
    ts_half = np.linspace(0.0, symbol.horizon, 2 * N + 1)
    try:
        if symbol.is_constant():
            calA0, calB0 = assemble_path(symbol, xi, ts_half[:1])
            V, logs = _rk4_run(1j * (calA0[0] + calB0[0]), N, h, V0,
                               renormalize=config.renormalize)
        elif (2 * N + 1) * m ** 4 <= 6_000_000:
            calA_half, calB_half = assemble_path(symbol, xi, ts_half)
            V, logs = _rk4_run(1j * (calA_half + calB_half), N, h, V0,
                               renormalize=config.renormalize)
        else:
            # window the half-grid assembly to bound memory on long runs
            V, logs = _windowed_rk4(symbol, xi, ts_half, N, h, V0,
                                    config.renormalize)
    except NumericError as exc:
        raise NumericError(f"{exc} (xi={xi})") from exc
    ts = ts_half[::2]
    eps_val = config.eps_for(m, xi) if eps is None else float(eps)
    trace = EnergyTrace(ts=ts, V=V, log_scale=logs, xi=np.atleast_1d(np.asarray(xi, float)),
                        eps=eps_val, m=m)
    if collect_energy:
        calA_full, calB_full = assemble_path(symbol, xi, ts)
        _energy_diagnostics(trace, symbol, calA_full, calB_full, eps_val)
    return trace


def _windowed_rk4(symbol, xi, ts_half, N, h, V0, renormalize, window=2048):
    m2 = V0.size
    V = np.empty((N + 1, m2), dtype=complex)
    logs = np.zeros(N + 1)
    V[0] = V0
    y = V0
    acc = 0.0
    for k0 in range(0, N, window):
        k1 = min(k0 + window, N)
        seg_half = ts_half[2 * k0 : 2 * k1 + 1]
        calA, calB = assemble_path(symbol, xi, seg_half)
        seg_V, seg_logs = _rk4_run(1j * (calA + calB), k1 - k0, h, y, renormalize)
        V[k0 + 1 : k1 + 1] = seg_V[1:]
        logs[k0 + 1 : k1 + 1] = acc + seg_logs[1:]
        y = seg_V[-1]
        acc += seg_logs[-1]
    return V, logs


def reweight_energy(trace: EnergyTrace, symbol: SystemSymbol, eps: float) -> EnergyTrace:
    """Recompute the energy diagnostics of an existing trajectory at another eps.

    The trajectory itself does not depend on eps, so sweeps over the
    quasi-symmetriser parameter reuse the integrated state.
    """
    new = EnergyTrace(ts=trace.ts, V=trace.V, log_scale=trace.log_scale,
                      xi=trace.xi, eps=float(eps), m=trace.m)
    calA, calB = assemble_path(symbol, trace.xi, trace.ts)
    _energy_diagnostics(new, symbol, calA, calB, float(eps))
    return new


def oracle_gap(symbol: SystemSymbol, xi, u0hat, config: SolverConfig) -> float:
    """Max deviation between the reduced solve and the lifted direct oracle.

    Both systems are integrated with the same step; the direct trajectory is
    lifted through the reduction transform and compared against the reduced
    state, normalised by the largest lifted state norm.
    """
    ts, traj = direct_integrate(symbol, xi, u0hat, config)
    U = lift_trajectory(symbol, xi, ts, traj)
    V0 = transform_initial_data(symbol, u0hat, xi).V
    trace = reduced_integrate(symbol, xi, V0, config, collect_energy=False)
    scale = max(float(np.linalg.norm(U, axis=1).max()), 1e-300)
    return float(np.linalg.norm(trace.V - U, axis=1).max() / scale)


# ---------------------------------------------------------------------------
# energy inequality


@dataclass(frozen=True)
class InequalityReport:
    """Fitted growth constants and pointwise slack margins per trace."""

    C2: float
    C3: float
    margins: tuple          # per trace: max of dtE/E - K - 1.05 (C2 e<xi> + C3)
    K_integrals: tuple
    passed: bool
    witnesses: tuple


def _valid_mask(trace: EnergyTrace) -> np.ndarray:
    scale = float(trace.E.max(initial=0.0))
    return trace.E > max(ENERGY_FLOOR, 1e-13 * scale)


def energy_inequality_check(traces, slack: float = 0.05) -> InequalityReport:
    """Fit (C2, C3) and verify the pointwise growth inequality with slack.

    The constants are frequency-independent in the theory, so they are fitted
    by nonnegative least squares on the per-trace maxima of dtE/E - K against
    eps * <xi> using every trace except the highest frequency, then asserted
    pointwise on all traces with the given slack.  A system whose constants
    grow with frequency fails at the top frequency.
    """
    traces = list(traces)
    if not traces:
        raise DomainError("need at least one trace")
    xs, ms = [], []
    for tr in traces:
        if tr.E is None:
            raise DomainError("traces must carry energy diagnostics")
        mask = _valid_mask(tr)
        alpha = np.zeros_like(tr.E)
        alpha[mask] = tr.dtE[mask] / tr.E[mask] - tr.K[mask]
        xs.append(tr.eps * bracket(tr.xi))
        ms.append(float(alpha.max(initial=0.0)))
    xs = np.asarray(xs)
    ms = np.asarray(ms)

    order = np.argsort([bracket(tr.xi) for tr in traces])
    fit_idx = order[:-1] if len(traces) >= 3 else order
    X = np.stack([xs[fit_idx], np.ones(fit_idx.size)], axis=1)
    sol, *_ = np.linalg.lstsq(X, ms[fit_idx], rcond=None)
    C2, C3 = float(sol[0]), float(sol[1])
    if C2 < 0.0:
        C2 = 0.0
        C3 = float(ms[fit_idx].max(initial=0.0))
    if C3 < 0.0:
        C3 = 0.0
        C2 = float(np.dot(xs[fit_idx], ms[fit_idx]) / np.dot(xs[fit_idx], xs[fit_idx]))

    margins, witnesses, k_ints = [], [], []
    for tr, x in zip(traces, xs):
        mask = _valid_mask(tr)
        bound = tr.K + (1.0 + slack) * (C2 * x + C3)
        resid = np.where(mask, tr.dtE - bound * tr.E, -np.inf)
        rel = np.where(mask, resid / np.maximum(tr.E, ENERGY_FLOOR), -np.inf)
        tr.inequality_residual = np.where(mask, resid, 0.0)
        worst = int(np.argmax(rel))
        margins.append(float(rel[worst]) if mask.any() else 0.0)
        witnesses.append({"t": float(tr.ts[worst]), "xi": tr.xi.tolist(),
                          "margin": float(rel[worst])})
        k_ints.append(float(np.trapezoid(tr.K, tr.ts)))
    passed = all(mg <= 0.0 for mg in margins)
    return InequalityReport(C2=C2, C3=C3, margins=tuple(margins),
                            K_integrals=tuple(k_ints), passed=passed,
                            witnesses=tuple(witnesses))


@dataclass(frozen=True)
class KSweepReport:
    """Scaling of the integrated first energy term across an eps sweep."""

    eps_values: tuple
    K_integrals: tuple
    fitted_exponent: float
    theoretical_exponent: float
    C1_values: tuple        # integral * eps^{-theoretical exponent}


def integral_K_sweep(symbol: SystemSymbol, xi, eps_values, config: SolverConfig,
                     u0hat=None, k_regularity: float = 2.0) -> KSweepReport:
    """Integrate once, then measure int_0^T K_eps dt across the eps sweep.

    Fits the exponent p in int K ~ C eps^p by least squares on the log-log
    pairs and reports the theoretical bound exponent -2(m-1)/k next to it.
    """
    m = symbol.m
    if u0hat is None:
        u0hat = np.ones(m, dtype=complex) / np.sqrt(m)
    V0 = transform_initial_data(symbol, u0hat, xi).V
    base = reduced_integrate(symbol, xi, V0, config, collect_energy=False)
    integrals = []
    for eps in eps_values:
        tr = reweight_energy(base, symbol, eps)
        integrals.append(float(np.trapezoid(tr.K, tr.ts)))
    eps_arr = np.asarray(eps_values, dtype=float)
    ints = np.asarray(integrals)
    X = np.stack([np.log(eps_arr), np.ones(eps_arr.size)], axis=1)
    sol, *_ = np.linalg.lstsq(X, np.log(np.maximum(ints, 1e-300)), rcond=None)
    theo = -2.0 * (m - 1) / k_regularity
    return KSweepReport(
        eps_values=tuple(float(e) for e in eps_arr),
        K_integrals=tuple(integrals),
        fitted_exponent=float(sol[0]),
        theoretical_exponent=theo,
        C1_values=tuple(float(v * e ** (-theo)) for v, e in zip(ints, eps_arr)),
    )


# ---------------------------------------------------------------------------
# growth classification


@dataclass(frozen=True)
class GrowthReport:
    """Frequency-growth fit of sup_t log(|V(t, xi)| / |V(0, xi)|)."""

    brackets: tuple
    growth_logs: tuple
    kappa: float            # slope of the log<xi> model
    sigma: float            # best exponent of the <xi>^sigma model
    rate: float             # coefficient of <xi>^sigma
    classification: str     # "polynomial" | "gevrey" | "exponential"
    aic_log: float
    aic_power: float


SIGMA_GRID = np.round(np.arange(0.05, 1.0001, 0.05), 2)
SIGMA_EXPONENTIAL = 0.95


def growth_fit(symbol: SystemSymbol, config: SolverConfig, u0hat=None) -> GrowthReport:
    """Sweep the frequency grid, fit both growth models, classify.

    The polynomial model regresses growth on log<xi> (slope kappa); the
    power model regresses on <xi>^sigma over a fixed sigma grid.  The model
    with the lower AIC-like score wins; sigma at or above 0.95 is reported
    as exponential growth with the fitted rate.
    """
    xi_grid = np.asarray(config.xi_grid, dtype=float)
    if xi_grid.size < 3:
        raise DomainError("growth fit needs at least three frequencies")
    if xi_grid.max() / xi_grid.min() < 99.0:
        raise DomainError("frequency grid must span at least two decades")
    m = symbol.m
    if u0hat is None:
        u0hat = np.ones(m, dtype=complex) / np.sqrt(m)
    cfg = replace(config, renormalize=True)
    brackets, growths = [], []
    for xi in xi_grid:
        V0 = transform_initial_data(symbol, u0hat, xi).V
        trace = reduced_integrate(symbol, xi, V0, cfg, collect_energy=False)
        brackets.append(bracket(xi))
        growths.append(trace.growth_log)
    b = np.asarray(brackets)
    y = np.asarray(growths)
    n = y.size

    def fit(Xcols):
        X = np.stack(Xcols, axis=1)
        sol, *_ = np.linalg.lstsq(X, y, rcond=None)
        sse = float(np.sum((X @ sol - y) ** 2))
        return sol, sse

    sol_log, sse_log = fit([np.log(b), np.ones(n)])
    best = (None, np.inf, None)
    for sigma in SIGMA_GRID:
        sol_p, sse_p = fit([b ** sigma, np.ones(n)])
        if sse_p < best[1]:
            best = (sol_p, sse_p, float(sigma))
    sol_pow, sse_pow, sigma = best

    def aic(sse, k_params):
        return n * log(max(sse, 1e-300) / n) + 2.0 * k_params

    aic_log = aic(sse_log, 2)
    aic_pow = aic(sse_pow, 3)
    if aic_log <= aic_pow or sigma <= SIGMA_GRID[0]:
        classification = "polynomial"
    elif sigma >= SIGMA_EXPONENTIAL:
        classification = "exponential"
    else:
        classification = "gevrey"
    return GrowthReport(
        brackets=tuple(float(v) for v in b),
        growth_logs=tuple(float(v) for v in y),
        kappa=float(sol_log[0]),
        sigma=float(sigma),
        rate=float(sol_pow[0]),
        classification=classification,
        aic_log=float(aic_log),
        aic_power=float(aic_pow),
    )


# ---------------------------------------------------------------------------
# end-to-end Cauchy solve on a periodic grid


@dataclass(frozen=True)
class CauchyField:
    """Snapshots of the solution on the periodic grid [0, 2 pi)."""

    x: np.ndarray
    snapshot_ts: np.ndarray
    fields: np.ndarray      # (n_snapshots, m, n_grid) complex


def solve_cauchy_1d(symbol: SystemSymbol, u0_samples, config: SolverConfig,
                    snapshot_ts) -> CauchyField:
    """Solve the Cauchy problem on [0, 2 pi) by per-mode reduced integration.

    ``u0_samples`` has shape (m, n_grid) with n_grid a power of two.  Each
    Fourier mode is pushed through the reduction, integrated, and the first
    band component is rescaled by <xi>^{-(m-1)} before the inverse transform.
    A constant-coefficient symbol takes a batched fast path over all modes.
    """
    if symbol.n != 1:
        raise DomainError("the Cauchy solver is one-dimensional (n = 1)")
    u0 = np.asarray(u0_samples, dtype=complex)
    m = symbol.m
    if u0.ndim != 2 or u0.shape[0] != m:
        raise DomainError(f"u0 must have shape (m, n_grid), got {u0.shape}")
    n_grid = u0.shape[1]
    if n_grid < 2 or n_grid & (n_grid - 1):
        raise DomainError(f"grid size {n_grid} is not a power of two")
    snapshot_ts = np.atleast_1d(np.asarray(snapshot_ts, dtype=float))
    if snapshot_ts.min() < 0 or snapshot_ts.max() > symbol.horizon:
        raise DomainError("snapshots must lie inside [0, T]")

    wavenumbers = np.fft.fftfreq(n_grid, d=1.0 / n_grid)  # integers on [0, 2 pi)
    u0_hat = np.fft.fft(u0, axis=1)

    xi_max = float(np.abs(wavenumbers).max())
    N, h = config.steps_for(symbol, np.array([xi_max]))
    snap_idx = np.clip(np.rint(snapshot_ts / h).astype(int), 0, N)

    V0 = np.empty((n_grid, m * m), dtype=complex)
    brackets = np.empty(n_grid)
    for q, k in enumerate(wavenumbers):
        V0[q] = transform_initial_data(symbol, u0_hat[:, q], np.array([k])).V
        brackets[q] = bracket(np.array([k]))

    hat_snaps = np.empty((snap_idx.size, m, n_grid), dtype=complex)
    if symbol.is_constant():
        # One constant matrix per mode; integrate all modes in lockstep.
        M = np.empty((n_grid, m * m, m * m), dtype=complex)
        for q, k in enumerate(wavenumbers):
            calA, calB = assemble_path(symbol, np.array([k]), np.array([0.0]))
            M[q] = 1j * (calA[0] + calB[0])
        y = V0.copy()
        pending = {int(i): None for i in snap_idx}
        if 0 in pending:
            pending[0] = y.copy()
        for step in range(N):
            k1 = np.einsum("qab,qb->qa", M, y)
            k2 = np.einsum("qab,qb->qa", M, y + (0.5 * h) * k1)
            k3 = np.einsum("qab,qb->qa", M, y + (0.5 * h) * k2)
            k4 = np.einsum("qab,qb->qa", M, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if (step + 1) in pending:
                pending[step + 1] = y.copy()
        if not np.isfinite(y).all():
            raise NumericError("non-finite state in the mode sweep")
        for s, idx in enumerate(snap_idx):
            states = pending[int(idx)]
            for i in range(m):
                hat_snaps[s, i] = states[:, i * m] * brackets ** (-(m - 1))
    else:
        cfg = replace(config, t_step=h)
        for q, k in enumerate(wavenumbers):
            trace = reduced_integrate(symbol, np.array([k]), V0[q], cfg,
                                      collect_energy=False)
            for s, idx in enumerate(snap_idx):
                for i in range(m):
                    hat_snaps[s, i, q] = trace.V[idx, i * m] * brackets[q] ** (-(m - 1))

    fields = np.fft.ifft(hat_snaps, axis=2)
    x = 2.0 * np.pi * np.arange(n_grid) / n_grid
    return CauchyField(x=x, snapshot_ts=snap_idx * h, fields=fields)
