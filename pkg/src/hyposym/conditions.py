"""Numeric evaluation of the hypotheses: eigenvalue separation, Levi-type
conditions in both formulations, the zone decomposition, and the sandwich
inequality for the lower-order terms.

All conditions are uniform claims over (t, xi); this module measures them on
a fixed, reproducible sampling grid and reports suprema with witnesses.  The
0/0 convention throughout: a ratio whose numerator is below ``ABS_FLOOR``
counts as 0 (the inequality holds vacuously); a vanishing denominator under a
live numerator is reported as infinity with the witness recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hyposym.errors import CapabilityError, DomainError
from hyposym.pencils import hermitian_part
from hyposym.quasisym import build_W, lift_blocks
from hyposym.reduction import assemble, _bold_A_path, _bold_B_path, _deriv_paths
from hyposym.symbols import (
    SystemSymbol,
    bracket,
    companion_roots,
    elementary_symmetric_all,
    eval_symbol_path,
    faddeev_leverrier,
    time_derivative,
)

ABS_FLOOR = 1e-14
RANK_TOL = 1e-10
# Ratios beyond this are reported as unbounded: a double root computed via the
# companion matrix splits at round-off scale, so "denominator exactly zero"
# must be read as "negligible against the numerator".
RATIO_CAP = 1e12


# ---------------------------------------------------------------------------
# sampling grid


def _directions(n: int, count: int) -> np.ndarray:
    """Deterministic direction set on the unit sphere in R^n."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        golden = (np.sqrt(5.0) - 1.0) / 2.0
        angles = 2.0 * np.pi * golden * np.arange(count)
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    if n == 3:
        # Fibonacci sphere.
        k = np.arange(count) + 0.5
        phi = np.arccos(1.0 - 2.0 * k / count)
        theta = np.pi * (1.0 + np.sqrt(5.0)) * k
        return np.stack(
            [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)],
            axis=1,
        )
    raise CapabilityError(f"direction sampling implemented for n <= 3, got n={n}")


@dataclass(frozen=True)
class SamplingGrid:
    """Cartesian (t, r, direction) grid with xi = r * direction."""

    ts: np.ndarray
    radii: np.ndarray
    dirs: np.ndarray

    @classmethod
    def default(cls, symbol: SystemSymbol, n_t: int = 201, n_r: int = 32,
                r_min: float = 1.0, r_max: float = 1e4, n_dirs: int = 16):
        ts = np.linspace(0.0, symbol.horizon, n_t)
        radii = np.geomspace(r_min, r_max, n_r)
        return cls(ts=ts, radii=radii, dirs=_directions(symbol.n, n_dirs))

    def __post_init__(self):
        if self.ts.size == 0 or self.radii.size == 0 or self.dirs.shape[0] == 0:
            raise DomainError("empty sampling grid")

    @property
    def shape(self) -> tuple:
        return (self.ts.size, self.radii.size, self.dirs.shape[0])

    def xi(self, r_idx: int, d_idx: int) -> np.ndarray:
        return self.radii[r_idx] * self.dirs[d_idx]

    def points(self):
        for r_idx in range(self.radii.size):
            for d_idx in range(self.dirs.shape[0]):
                yield r_idx, d_idx, self.xi(r_idx, d_idx)


@dataclass
class GridData:
    """Per-grid-point spectra and lower-order data, indexed (t, r, dir)."""

    lambdas: np.ndarray          # (T, R, D, m) rescaled eigenvalues (real parts)
    nonhyperbolic: int
    deleted_sigmas: np.ndarray   # (T, R, D, m, m); [..., i, c] = sigma_{m-1-c}(pi_i lambda)
    b_entries: np.ndarray        # (T, R, D, m-1, m, m) scaled entries of calB
    dtA0_norms: np.ndarray       # (T, R, D, m-1) spectral norms of D_t^k A_0


def evaluate_grid(symbol: SystemSymbol, grid: SamplingGrid) -> GridData:
    """Evaluate eigenvalues, W-row data, b entries and derivative norms."""
    m = symbol.m
    T, R, D = grid.shape
    lambdas = np.zeros((T, R, D, m))
    deleted = np.zeros((T, R, D, m, m))
    b_entries = np.zeros((T, R, D, m - 1, m, m), dtype=complex)
    dt_norms = np.zeros((T, R, D, m - 1))
    nonhyp = 0

    deriv_symbols = [time_derivative(symbol, k) for k in range(m)]
    for r_idx, d_idx, xi in grid.points():
        bxi = bracket(xi)
        A = eval_symbol_path(symbol, grid.ts, xi)
        c0 = faddeev_leverrier(A / bxi)
        for t_idx in range(T):
            roots = companion_roots(c0[t_idx].real)
            order = np.argsort(roots.real, kind="stable")
            roots = roots[order]
            radius = float(np.abs(roots).max(initial=0.0))
            if np.abs(roots.imag).max(initial=0.0) > 1e-8 * (1.0 + radius):
                nonhyp += 1
            lam = roots.real
            lambdas[t_idx, r_idx, d_idx] = lam
            for i in range(m):
                sig = elementary_symmetric_all(np.delete(lam, i))
                deleted[t_idx, r_idx, d_idx, i, : m - 1] = sig[m - 1 - np.arange(m - 1)]
                deleted[t_idx, r_idx, d_idx, i, m - 1] = 1.0

        c = faddeev_leverrier(A.astype(complex))
        dtA = _deriv_paths(symbol, xi, grid.ts, m - 1)
        boldB = _bold_B_path(_bold_A_path(A.astype(complex), c, m), dtA, m)
        for l in range(1, m):
            b_entries[:, r_idx, d_idx, l - 1] = boldB[l - 1] * bxi ** (l - m)
        for k in range(1, m):
            dA0 = eval_symbol_path(deriv_symbols[k], grid.ts, xi) / bxi
            dt_norms[:, r_idx, d_idx, k - 1] = np.linalg.svd(dA0, compute_uv=False)[:, 0]
    return GridData(
        lambdas=lambdas,
        nonhyperbolic=nonhyp,
        deleted_sigmas=deleted,
        b_entries=b_entries,
        dtA0_norms=dt_norms,
    )


# ---------------------------------------------------------------------------
# individual conditions


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Elementwise ratio with the 0/0 convention and infinity sentinel."""
    out = np.zeros_like(num, dtype=float)
    live = num > ABS_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), np.inf)
    out[live] = vals[live]
    out[live & (vals > RATIO_CAP)] = np.inf
    return out


def _argmax_witness(values: np.ndarray, grid: SamplingGrid):
    flat = np.argmax(np.where(np.isnan(values), -np.inf, values))
    t_idx, r_idx, d_idx = np.unravel_index(flat, values.shape)
    return {
        "t": float(grid.ts[t_idx]),
        "xi": (grid.radii[r_idx] * grid.dirs[d_idx]).tolist(),
        "value": float(values[t_idx, r_idx, d_idx]),
    }


def ks_pointwise(lambdas: np.ndarray) -> np.ndarray:
    """Worst pair ratio (l_i^2 + l_j^2) / (l_i - l_j)^2 per grid point."""
    m = lambdas.shape[-1]
    worst = np.zeros(lambdas.shape[:-1])
    for i in range(m):
        for j in range(i + 1, m):
            num = lambdas[..., i] ** 2 + lambdas[..., j] ** 2
            den = (lambdas[..., i] - lambdas[..., j]) ** 2
            worst = np.maximum(worst, _ratio(num, den))
    return worst


def ks_constant(symbol: SystemSymbol, grid: SamplingGrid, data: GridData | None = None):
    """Supremum of the pairwise eigenvalue-separation ratio over the grid.

    Coinciding zero eigenvalues contribute 0; coinciding nonzero eigenvalues
    contribute infinity, recorded with their (t, xi) witness.
    """
    data = data or evaluate_grid(symbol, grid)
    values = ks_pointwise(data.lambdas)
    return float(values.max()), _argmax_witness(values, grid)


def symmetriser_diagonal(lambdas, j: int) -> float:
    """Diagonal entry q_jj of the permutation-symmetrised part, 1 <= j <= m-1.

    Normalised by (m-1)!: q_jj = sum_i sigma_{m-j}(pi_i lambda)^2, matching
    the deleted-variable sums that bound the lower-order terms.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    m = lam.size
    if not 1 <= j <= m - 1:
        raise DomainError(f"j={j} outside [1, {m - 1}]")
    total = 0.0
    for i in range(m):
        sig = elementary_symmetric_all(np.delete(lam, i))
        total += sig[m - j] ** 2
    return float(total)


def levi_pointwise(data: GridData) -> np.ndarray:
    """Levi ratios per (grid point, l, j): column sums of |b|^2 against q_ll."""
    m = data.lambdas.shape[-1]
    shape = data.lambdas.shape[:-1]
    out = np.zeros(shape + (m - 1, m))
    for l in range(1, m):
        # q_ll = sum_i sigma_{m-l}(pi_i lambda)^2; column l-1 of the W rows
        # holds sigma_{m-l}(pi_i lambda).
        den = (data.deleted_sigmas[..., :, l - 1] ** 2).sum(axis=-1)
        for j in range(m):
            num = (np.abs(data.b_entries[..., l - 1, :, j]) ** 2).sum(axis=-1)
            out[..., l - 1, j] = _ratio(num, den)
    return out


def levi_ratios(symbol: SystemSymbol, grid: SamplingGrid, data: GridData | None = None):
    """Per-(l, j) suprema of the lower-order-term ratios, with witness."""
    data = data or evaluate_grid(symbol, grid)
    values = levi_pointwise(data)
    m = symbol.m
    sups = values.reshape(-1, m - 1, m).max(axis=0)
    witness = _argmax_witness(values.max(axis=(-2, -1)), grid)
    return sups, values, witness


def thm2_pointwise(data: GridData) -> np.ndarray:
    """max_k ||D_t^k A_0||^2 / q_jj per (grid point, j)."""
    m = data.lambdas.shape[-1]
    shape = data.lambdas.shape[:-1]
    num = (data.dtA0_norms ** 2).max(axis=-1)
    out = np.zeros(shape + (m - 1,))
    for j in range(1, m):
        den = (data.deleted_sigmas[..., :, j - 1] ** 2).sum(axis=-1)
        out[..., j - 1] = _ratio(num, den)
    return out


def thm2_ratios(symbol: SystemSymbol, grid: SamplingGrid, data: GridData | None = None):
    """Per-j suprema of the derivative-norm condition, with witness."""
    data = data or evaluate_grid(symbol, grid)
    values = thm2_pointwise(data)
    sups = values.reshape(-1, symbol.m - 1).max(axis=0)
    witness = _argmax_witness(values.max(axis=-1), grid)
    return sups, values, witness


def sandwich_of(W_lift: np.ndarray, B: np.ndarray):
    """Smallest C with |W_lift B V| <= C |W_lift V| for given matrices.

    Computed on the orthogonal complement of ker(W*W) via a rank-revealing
    eigendecomposition; if the lower-order form acts outside that range the
    result is infinity together with a witness vector.
    """
    WB = W_lift @ B
    G = hermitian_part(W_lift.conj().T @ W_lift)
    Bq = hermitian_part(WB.conj().T @ WB)
    vals, vecs = np.linalg.eigh(G)
    cut = RANK_TOL * max(vals[-1], 0.0)
    keep = vals > cut
    null_vecs = vecs[:, ~keep]
    if null_vecs.shape[1]:
        leak = np.linalg.norm(WB @ null_vecs, axis=0)
        norm_B = np.linalg.norm(WB) + 1.0
        worst = int(np.argmax(leak))
        if leak[worst] > RANK_TOL * norm_B:
            return float("inf"), null_vecs[:, worst]
    if not keep.any():
        return 0.0, None
    Ur = vecs[:, keep]
    white = Ur / np.sqrt(vals[keep])[None, :]
    M = hermitian_part(white.conj().T @ Bq @ white)
    top = float(np.linalg.eigvalsh(M)[-1])
    return float(np.sqrt(max(top, 0.0))), None


def sandwich_constant(symbol: SystemSymbol, t: float, xi):
    """Smallest C with |W_lift B V| <= C |W_lift V| at one (t, xi)."""
    reduced = assemble(symbol, t, xi)
    spec_roots = companion_roots(faddeev_leverrier(
        eval_symbol_path(symbol, np.array([t]), np.atleast_1d(xi))[0] / bracket(xi)
    ).real)
    lam = np.sort(spec_roots.real)
    Wl = lift_blocks(build_W(lam))
    return sandwich_of(Wl, reduced.calB)


def zone_classify(V, lambdas, deltas) -> int:
    """Zone index of a reduced state under the nested decomposition.

    Returns the first h in 1..m-2 whose zone inequality holds, else m-1 for
    the final complement; scale-invariant in V and permutation-invariant in
    lambda.  For m = 2 there are no zones and the result is always 1.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    m = lam.size
    V = np.asarray(V, dtype=complex).ravel()
    if V.size != m * m:
        raise DomainError(f"state must have {m * m} components, got {V.size}")
    deltas = np.asarray(deltas, dtype=float).ravel()
    if m == 2:
        return 1
    if deltas.size < m - 2:
        raise DomainError(f"need {m - 2} zone thresholds, got {deltas.size}")
    sig_sq = np.zeros(m + 1)
    for i in range(m):
        sig = elementary_symmetric_all(np.delete(lam, i))
        for j in range(1, m + 1):
            # sigma_{m-j}(pi_i lambda); j = m gives sigma_0 = 1.
            sig_sq[j] += sig[m - j] ** 2
    T = np.zeros(m + 1)
    for j in range(1, m + 1):
        T[j] = float(np.sum(np.abs(V[j - 1 :: m]) ** 2))
    for h in range(1, m - 1):
        lhs = sum(sig_sq[j] * T[j] for j in range(h + 1, m))
        rhs = deltas[h - 1] * sig_sq[h] * T[h]
        if lhs <= rhs:
            return h
    return m - 1


@dataclass(frozen=True)
class LemmaReport:
    difference_identity_residual: float
    grouped_bound_constant: float


def difference_identity_residual_of(lambdas) -> float:
    """Max relative residual of the deleted-variable difference identity.

    For every pair i != j and 1 <= k <= m-1:
    sigma_{m-k}(pi_i l) - sigma_{m-k}(pi_j l)
        = (-1)^{m-k} (l_j - l_i) * sum of products over (m-k-1)-subsets
          avoiding i and j.
    """
    from itertools import combinations

    lam = np.asarray(lambdas, dtype=float).ravel()
    m = lam.size
    worst = 0.0
    sigs = [elementary_symmetric_all(np.delete(lam, i)) for i in range(m)]
    for k in range(1, m):
        for i in range(m):
            for j in range(m):
                if i == j:
                    continue
                lhs = sigs[i][m - k] - sigs[j][m - k]
                rest = [idx for idx in range(m) if idx not in (i, j)]
                ssum = sum(
                    float(np.prod(lam[list(sub)]))
                    for sub in combinations(rest, m - k - 1)
                )
                rhs = (-1.0) ** (m - k) * (lam[j] - lam[i]) * ssum
                scale = 1.0 + max(abs(lhs), abs(rhs))
                worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def grouped_bound_constant_of(lambdas, V_batch: np.ndarray) -> float:
    """Fitted constant for the lower bound on grouped W-products.

    Largest ratio RHS/LHS over the batch, where for each k
    LHS = sum_{l,i} |sum_{j>=k} sigma_{m-j}(pi_i l) V_{j+lm}|^2 and
    RHS = sum_i sigma_{m-k}(pi_i l)^2 * sum_l |V_{k+lm}|^2.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    m = lam.size
    V_batch = np.atleast_2d(np.asarray(V_batch, dtype=complex))
    sig = np.zeros((m, m + 1))
    for i in range(m):
        s = elementary_symmetric_all(np.delete(lam, i))
        for j in range(1, m + 1):
            sig[i, j] = s[m - j]
    worst = 0.0
    for V in V_batch:
        blocks = V.reshape(m, m)  # blocks[l, j-1] = V_{j + l m}
        for k in range(1, m + 1):
            lhs = 0.0
            for l in range(m):
                partial = sig[:, k:] @ blocks[l, k - 1 :]
                lhs += float(np.sum(np.abs(partial) ** 2))
            rhs = float((sig[:, k] ** 2).sum() * np.sum(np.abs(blocks[:, k - 1]) ** 2))
            if rhs > ABS_FLOOR:
                if lhs == 0.0:
                    return float("inf")
                worst = max(worst, rhs / lhs)
    return worst


def lemma_identities_check(lambdas, n_states: int = 64, seed: int = 0) -> LemmaReport:
    """Exact identity residual plus the fitted inequality constant at one lambda."""
    lam = np.asarray(lambdas, dtype=float).ravel()
    rng = np.random.default_rng(seed)
    m = lam.size
    V = rng.standard_normal((n_states, m * m)) + 1j * rng.standard_normal((n_states, m * m))
    return LemmaReport(
        difference_identity_residual=difference_identity_residual_of(lam),
        grouped_bound_constant=grouped_bound_constant_of(lam, V),
    )


def choose_deltas(symbol: SystemSymbol, t: float, xi, n_states: int = 256,
                  seed: int = 0, max_doublings: int = 40) -> np.ndarray:
    """Doubling search for zone thresholds that make the piecewise bounds hold.

    Starting from delta_h = 1, doubles all thresholds until, on a seeded
    sample of states, every nonempty zone shows a strictly positive lower
    constant min |W V|^2 / (S_h T_h) for its designated group.
    """
    m = symbol.m
    if m == 2:
        return np.zeros(0)
    lam = np.sort(companion_roots(faddeev_leverrier(
        eval_symbol_path(symbol, np.array([t]), np.atleast_1d(xi))[0] / bracket(xi)
    ).real).real)
    Wl = lift_blocks(build_W(lam))
    sig_sq = np.zeros(m + 1)
    sigs = [elementary_symmetric_all(np.delete(lam, i)) for i in range(m)]
    for j in range(1, m + 1):
        sig_sq[j] = sum(s[m - j] ** 2 for s in sigs)
    rng = np.random.default_rng(seed)
    states = rng.standard_normal((n_states, m * m)) + 1j * rng.standard_normal((n_states, m * m))
    deltas = np.ones(m - 2)
    for _ in range(max_doublings):
        ok = True
        for V in states:
            h = zone_classify(V, lam, deltas)
            T_h = float(np.sum(np.abs(V[h - 1 :: m]) ** 2))
            denom = sig_sq[h] * T_h
            if denom <= ABS_FLOOR:
                continue
            lower = float(np.linalg.norm(Wl @ V) ** 2) / denom
            if lower <= ABS_FLOOR:
                ok = False
                break
        if ok:
            return deltas
        deltas = deltas * 2.0
    return deltas


# ---------------------------------------------------------------------------
# aggregated report


@dataclass
class ConditionReport:
    """Measured constants of all hypotheses on a sampling grid."""

    m: int
    ks_constant: float
    ks_witness: dict
    levi_sups: np.ndarray        # (m-1, m)
    levi_witness: dict
    thm2_sups: np.ndarray        # (m-1,)
    thm2_witness: dict
    sandwich_sup: float
    sandwich_witness: dict
    implication_constant: float  # sup levi(l, j) / thm2(l) over live points
    zone_stats: dict
    nonhyperbolic_points: int
    grid: SamplingGrid
    levi_values: np.ndarray = field(repr=False, default=None)
    thm2_values: np.ndarray = field(repr=False, default=None)
    ks_values: np.ndarray = field(repr=False, default=None)


def run_conditions(symbol: SystemSymbol, grid: SamplingGrid | None = None,
                   seed: int = 0, deltas=None) -> ConditionReport:
    """Evaluate every condition on the grid and aggregate with witnesses."""
    grid = grid or SamplingGrid.default(symbol)
    data = evaluate_grid(symbol, grid)
    m = symbol.m

    ks_vals = ks_pointwise(data.lambdas)
    ks_sup, ks_wit = float(ks_vals.max()), _argmax_witness(ks_vals, grid)

    levi_vals = levi_pointwise(data)
    levi_sups = levi_vals.reshape(-1, m - 1, m).max(axis=0)
    levi_wit = _argmax_witness(levi_vals.max(axis=(-2, -1)), grid)

    thm2_vals = thm2_pointwise(data)
    thm2_sups = thm2_vals.reshape(-1, m - 1).max(axis=0)
    thm2_wit = _argmax_witness(thm2_vals.max(axis=-1), grid)

    # Implication direction: a finite derivative-norm ratio at a point must
    # bound the Levi ratio there up to a constant.
    impl = 0.0
    for l in range(m - 1):
        t2 = thm2_vals[..., l]
        live = np.isfinite(t2) & (t2 > ABS_FLOOR)
        for j in range(m):
            lv = levi_vals[..., l, j]
            if np.any(live & ~np.isfinite(lv)):
                impl = float("inf")
            elif live.any():
                impl = max(impl, float((lv[live] / t2[live]).max()))

    # Sandwich constant over the grid.
    sw_sup, sw_wit = 0.0, {}
    for r_idx, d_idx, xi in grid.points():
        for t_idx in range(0, grid.ts.size, 4):
            val, _ = sandwich_constant(symbol, grid.ts[t_idx], xi)
            if val > sw_sup:
                sw_sup = val
                sw_wit = {"t": float(grid.ts[t_idx]), "xi": xi.tolist(), "value": val}

    # Zone occupancy of seeded random states at grid spectra.
    rng = np.random.default_rng(seed)
    counts = {}
    if m >= 2:
        deltas = np.ones(max(m - 2, 0)) if deltas is None else np.asarray(deltas, float)
        flat_lams = data.lambdas.reshape(-1, m)
        sample = rng.choice(flat_lams.shape[0], size=min(1000, flat_lams.shape[0]), replace=False)
        for idx in sample:
            V = rng.standard_normal(m * m) + 1j * rng.standard_normal(m * m)
            h = zone_classify(V, flat_lams[idx], deltas)
            counts[h] = counts.get(h, 0) + 1

    return ConditionReport(
        m=m,
        ks_constant=ks_sup,
        ks_witness=ks_wit,
        levi_sups=levi_sups,
        levi_witness=levi_wit,
        thm2_sups=thm2_sups,
        thm2_witness=thm2_wit,
        sandwich_sup=sw_sup,
        sandwich_witness=sw_wit,
        implication_constant=impl,
        zone_stats={int(k): int(v) for k, v in sorted(counts.items())},
        nonhyperbolic_points=data.nonhyperbolic,
        grid=grid,
        levi_values=levi_vals,
        thm2_values=thm2_vals,
        ks_values=ks_vals,
    )
