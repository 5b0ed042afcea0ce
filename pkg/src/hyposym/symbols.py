"""Exact and numeric algebra on the matrix symbol A(t, xi).

A system is described by its first-order symbol

    A(t, xi) = sum_p A_p(t) * xi_p,

where each A_p(t) is an m x m matrix of univariate real polynomials in t.
The polynomial representation keeps every time derivative exact, which the
block-Sylvester reduction needs up to order m - 1.

Characteristic coefficients are computed with the Faddeev-LeVerrier trace
recursion and cross-checked against elementary symmetric polynomials of the
eigenvalues; eigenvalues themselves are obtained from the companion matrix of
the characteristic polynomial (via ``numpy.roots``), which preserves exact
zero roots and keeps coalescing spectra far more accurate than running a
general eigensolver on A itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from hyposym.errors import CapabilityError, DomainError, NumericError, ConsistencyError

# Relative tolerance for the Faddeev-LeVerrier vs. eigenvalue cross-check of
# the characteristic coefficients.  Double-precision trace recursion loses
# roughly m digits, so 1e-8 is comfortable for m <= 6.
CHAR_XCHECK_TOL = 1e-8

MAX_DIMENSION = 6


def bracket(xi) -> float:
    """Japanese bracket <xi> = sqrt(1 + |xi|^2); total, <0> = 1."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    return float(np.sqrt(1.0 + np.dot(xi, xi)))


@dataclass(frozen=True)
class SystemSymbol:
    """First-order m x m symbol with polynomial time coefficients.

    Parameters
    ----------
    coeffs : ndarray, shape (n, m, m, d)
        ``coeffs[p, i, j]`` holds the ascending-degree coefficients of the
        polynomial entry a_{ij,p}(t) multiplying frequency component xi_p.
    horizon : float
        Final time T > 0; all evaluations require 0 <= t <= T.
    """

    coeffs: np.ndarray
    horizon: float

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        if arr.ndim != 4 or arr.shape[1] != arr.shape[2]:
            raise DomainError(
                f"coeffs must have shape (n, m, m, degree+1), got {arr.shape}"
            )
        if arr.shape[3] == 0:
            arr = np.zeros(arr.shape[:3] + (1,))
        m = arr.shape[1]
        if not 2 <= m <= MAX_DIMENSION:
            raise CapabilityError(f"matrix dimension m={m} outside [2, {MAX_DIMENSION}]")
        if not np.isfinite(arr).all():
            raise DomainError("polynomial coefficients must be finite")
        if not (np.isfinite(self.horizon) and self.horizon > 0):
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        object.__setattr__(self, "coeffs", arr)

    @property
    def m(self) -> int:
        return self.coeffs.shape[1]

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[3] - 1

    def is_constant(self) -> bool:
        """True when every entry is constant in t (all lower-order terms vanish)."""
        return self.coeffs.shape[3] == 1 or not self.coeffs[..., 1:].any()

    def direction_matrices(self, t) -> np.ndarray:
        """Evaluate the per-direction coefficient matrices A_p(t).

        ``t`` may be a scalar or a 1-d array; the result has shape
        (n, m, m) respectively (len(t), n, m, m).
        """
        t_arr = np.asarray(t, dtype=float)
        # Horner evaluation over the trailing degree axis.
        out = np.zeros(t_arr.shape + self.coeffs.shape[:3])
        for k in range(self.coeffs.shape[3] - 1, -1, -1):
            out = out * t_arr[..., None, None, None] + self.coeffs[..., k]
        return out


@dataclass(frozen=True)
class Spectrum:
    """Rescaled eigenvalues of A_0 = <xi>^{-1} A(t, xi), ascending real part."""

    lambdas: np.ndarray
    hyperbolic: bool
    imag_residual: float


@dataclass(frozen=True)
class CharCoeffs:
    """Characteristic coefficients c_0..c_m of A(t, xi), c_0 = 1.

    c_h is a homogeneous polynomial of degree h in xi (``degrees`` records
    this); c_1 = -tr A and c_m = (-1)^m det A.  ``xcheck_residual`` is the
    relative disagreement between the trace recursion and the elementary
    symmetric polynomials of the eigenvalues.
    """

    c: np.ndarray
    xcheck_residual: float
    degrees: tuple = field(default=())

    def __post_init__(self):
        if not self.degrees:
            object.__setattr__(self, "degrees", tuple(range(len(self.c))))


def _check_time(symbol: SystemSymbol, t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= symbol.horizon:
        raise DomainError(f"t={t} outside [0, {symbol.horizon}]")
    return t


def eval_symbol(symbol: SystemSymbol, t: float, xi) -> np.ndarray:
    """Evaluate A(t, xi) = sum_p A_p(t) xi_p as a real m x m matrix."""
    t = _check_time(symbol, t)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.shape != (symbol.n,):
        raise DomainError(f"xi must have {symbol.n} components, got shape {xi.shape}")
    mats = symbol.direction_matrices(t)
    return np.einsum("p,pij->ij", xi, mats)


def eval_symbol_path(symbol: SystemSymbol, ts: np.ndarray, xi) -> np.ndarray:
    """Vectorised ``eval_symbol`` over a 1-d array of times, shape (len(ts), m, m)."""
    ts = np.asarray(ts, dtype=float)
    if ts.size and (ts.min() < 0.0 or ts.max() > symbol.horizon):
        raise DomainError("time grid leaves [0, T]")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    mats = symbol.direction_matrices(ts)
    return np.einsum("p,tpij->tij", xi, mats)


def time_derivative(symbol: SystemSymbol, k: int) -> SystemSymbol:
    """k-th formal time derivative of the symbol (plain d/dt, no factors of -i).

    The operator D_t = -i d/dt is realised downstream by multiplying with
    (-i)^k at assembly time, keeping this module real-valued.
    """
    if k < 0:
        raise DomainError(f"derivative order must be >= 0, got {k}")
    coeffs = symbol.coeffs
    for _ in range(k):
        d = coeffs.shape[3]
        if d == 1:
            coeffs = np.zeros(coeffs.shape[:3] + (1,))
            break
        coeffs = coeffs[..., 1:] * np.arange(1, d)
    return SystemSymbol(coeffs=coeffs, horizon=symbol.horizon)


def elementary_symmetric(lambdas, h: int) -> float:
    """Signed elementary symmetric polynomial of a real tuple.

    Returns (-1)^h * sum over h-element subsets of the products, with the
    h = 0 value equal to 1.  The input is sorted internally so the result is
    bitwise identical under any permutation of ``lambdas``.
    """
    lam = np.sort(np.asarray(lambdas, dtype=float))
    q = lam.size
    if not 0 <= h <= q:
        raise DomainError(f"h={h} outside [0, {q}]")
    # Newton's triangle recurrence on the sorted values: after absorbing each
    # lambda, e[j] holds the degree-j elementary symmetric sum.
    e = np.zeros(h + 1)
    e[0] = 1.0
    for x in lam:
        upper = min(h, q)
        for j in range(upper, 0, -1):
            e[j] += x * e[j - 1]
    return float((-1.0) ** h * e[h])


def elementary_symmetric_all(lambdas) -> np.ndarray:
    """All signed elementary symmetric polynomials sigma_0..sigma_q at once."""
    lam = np.sort(np.asarray(lambdas, dtype=float))
    q = lam.size
    e = np.zeros(q + 1)
    e[0] = 1.0
    for x in lam:
        for j in range(q, 0, -1):
            e[j] += x * e[j - 1]
    return e * (-1.0) ** np.arange(q + 1)


def faddeev_leverrier(A: np.ndarray) -> np.ndarray:
    """Characteristic coefficients of a stack of square matrices.

    Accepts shape (..., m, m) and returns shape (..., m + 1) with c_0 = 1,
    using the trace recursion  M_k = A (M_{k-1} + c_{k-1} I),
    c_k = -tr(M_k)/k.  Works for real or complex input.
    """
    A = np.asarray(A)
    m = A.shape[-1]
    batch = A.shape[:-2]
    eye = np.eye(m, dtype=A.dtype)
    c = np.zeros(batch + (m + 1,), dtype=A.dtype)
    c[..., 0] = 1.0
    M = np.zeros_like(A)
    for k in range(1, m + 1):
        M = A @ (M + c[..., k - 1, None, None] * eye)
        c[..., k] = -np.einsum("...ii->...", M) / k
    return c


def companion_roots(c: np.ndarray) -> np.ndarray:
    """Roots of tau^m + c_1 tau^{m-1} + ... + c_m via its companion matrix.

    ``numpy.roots`` strips exact trailing zeros before forming the companion
    matrix, so structurally zero eigenvalues come out exactly zero.
    """
    c = np.asarray(c, dtype=float)
    try:
        roots = np.roots(c)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - defensive
        raise NumericError(f"companion eigenvalue solve failed: {exc}") from exc
    # np.roots drops exact zero roots that come from trailing zeros.
    missing = c.size - 1 - roots.size
    if missing > 0:
        roots = np.concatenate([roots, np.zeros(missing, dtype=roots.dtype)])
    return roots


def rescaled_eigenvalues(symbol: SystemSymbol, t: float, xi) -> Spectrum:
    """Eigenvalues of <xi>^{-1} A(t, xi), sorted by ascending real part.

    The hyperbolic flag is true when the largest imaginary part does not
    exceed 1e-8 * (1 + spectral radius); quantities downstream must stay
    invariant under permutations of the returned values.
    """
    A0 = eval_symbol(symbol, t, xi) / bracket(xi)
    c = faddeev_leverrier(A0)
    if not np.isfinite(c).all():
        raise NumericError(f"characteristic recursion produced non-finite values at (t={t}, xi={xi})")
    try:
        roots = companion_roots(c.real)
    except NumericError as exc:
        raise NumericError(f"{exc} at (t={t}, xi={xi})") from exc
    order = np.argsort(roots.real, kind="stable")
    roots = roots[order]
    imag_residual = float(np.abs(roots.imag).max(initial=0.0))
    radius = float(np.abs(roots).max(initial=0.0))
    tol = 1e-8 * (1.0 + radius)
    return Spectrum(
        lambdas=roots.real.copy(),
        hyperbolic=imag_residual <= tol,
        imag_residual=imag_residual,
    )


def char_coeffs(symbol: SystemSymbol, t: float, xi) -> CharCoeffs:
    """Characteristic coefficients of the unrescaled symbol A(t, xi).

    Computed by the Faddeev-LeVerrier recursion and cross-checked against the
    elementary symmetric polynomials of the eigenvalues of A(t, xi); the two
    must agree to CHAR_XCHECK_TOL relative or a ConsistencyError is raised.
    """
    A = eval_symbol(symbol, t, xi)
    c = faddeev_leverrier(A).real
    # Independent route: general eigensolver on A, then signed symmetric sums.
    try:
        eigs = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigenvalue solve failed at (t={t}, xi={xi}): {exc}") from exc
    m = symbol.m
    # Vieta: prod (tau - mu_i) expanded by convolution, complex-safe.
    poly = np.ones(1, dtype=complex)
    for mu in eigs:
        poly = np.convolve(poly, np.array([1.0, -mu]))
    scale = 1.0 + np.abs(c).max()
    residual = float(np.abs(c - poly.real).max() / scale)
    residual = max(residual, float(np.abs(poly.imag).max() / scale))
    if residual > CHAR_XCHECK_TOL:
        raise ConsistencyError(
            f"characteristic-coefficient cross-check failed at (t={t}, xi={xi}): "
            f"relative residual {residual:.3e} > {CHAR_XCHECK_TOL:.1e}"
        )
    return CharCoeffs(c=c, xcheck_residual=residual, degrees=tuple(range(m + 1)))


def matrix_powers(A: np.ndarray, top: int) -> list:
    """[I, A, A^2, ..., A^top] for a stack of square matrices."""
    m = A.shape[-1]
    eye = np.broadcast_to(np.eye(m, dtype=A.dtype), A.shape).copy()
    powers = [eye]
    for _ in range(top):
        powers.append(powers[-1] @ A)
    return powers


def adjugate_coeff_matrices(symbol: SystemSymbol, t: float, xi) -> list:
    """Matrix coefficients B_{m-1}, ..., B_0 of adj(I tau - A(t, xi)).

    B_i = sum_{h=0}^{m-(i+1)} c_h A^{m-(i+1)-h}; the leading coefficient
    B_{m-1} is the identity, and the list satisfies
    adj(I tau - A)(I tau - A) = det(I tau - A) I for every tau.
    """
    A = eval_symbol(symbol, t, xi)
    c = faddeev_leverrier(A).real
    m = symbol.m
    powers = matrix_powers(A, m - 1)
    out = []
    for i in range(m - 1, -1, -1):
        B = np.zeros_like(A)
        for h in range(m - i):
            B += c[h] * powers[m - (i + 1) - h]
        out.append(B)
    return out


def cayley_hamilton_residual(symbol: SystemSymbol, t: float, xi) -> float:
    """Frobenius norm of sum_h c_h A^{m-h}, normalised by ||A||_F^m + 1."""
    A = eval_symbol(symbol, t, xi)
    c = faddeev_leverrier(A).real
    m = symbol.m
    powers = matrix_powers(A, m)
    acc = np.zeros_like(A)
    for h in range(m + 1):
        acc += c[h] * powers[m - h]
    return float(np.linalg.norm(acc) / (np.linalg.norm(A) ** m + 1.0))
