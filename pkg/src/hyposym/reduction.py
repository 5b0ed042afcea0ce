"""Block-Sylvester reduction of the first-order system.

The m x m system D_t u = A(t, D_x) u is turned into an m^2 x m^2 first-order
system D_t U = (calA + calB) U by applying the adjugate operator of
I D_t - A and stacking U_i = (D_t^{j-1} <D_x>^{m-j} u_i)_j per component.
calA is block diagonal with m identical companion blocks scaled by <xi>;
calB collects the lower-order terms that the reduction generates even for a
homogeneous system, one nonzero row per m-row band.

Every time derivative D_t^k A is exact: the symbol stores polynomial
coefficients and the factor (-i)^k is applied here, keeping the symbol
algebra real.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from hyposym.errors import DomainError
from hyposym.symbols import (
    SystemSymbol,
    bracket,
    eval_symbol_path,
    faddeev_leverrier,
    time_derivative,
)


@dataclass(frozen=True)
class ReducedSystem:
    """Reduced pair (calA, calB) at one (t, xi) plus its building blocks.

    ``bold_A[h]`` are the adjugate coefficient matrices (bold_A[0] = I) and
    ``bold_B[l-1]`` the lower-order matrices for l = 1..m-1.  ``calB`` stores
    the entries already scaled by <xi>^{l-m}.
    """

    m: int
    t: float
    xi: np.ndarray
    calA: np.ndarray
    calB: np.ndarray
    bold_A: tuple
    bold_B: tuple
    char: np.ndarray


@dataclass(frozen=True)
class StateVector:
    """Reduced state V of length m^2.

    Component (i - 1) * m + (j - 1) (zero-based) holds
    D_t^{j-1} <xi>^{m-j} u_i-hat, i.e. band i stacks the scaled time
    derivatives of the i-th original component.
    """

    V: np.ndarray
    m: int


def _deriv_paths(symbol: SystemSymbol, xi, ts: np.ndarray, top: int) -> list:
    """[(-i)^k d^k/dt^k A(t, xi) for k = 0..top], each of shape (len(ts), m, m)."""
    out = []
    for k in range(top + 1):
        path = eval_symbol_path(time_derivative(symbol, k), ts, xi).astype(complex)
        out.append((-1j) ** k * path)
    return out


def _bold_A_path(A: np.ndarray, c: np.ndarray, m: int) -> list:
    """Adjugate coefficients bold_A_0..bold_A_{m-1} for stacked A, c."""
    powers = [np.broadcast_to(np.eye(m, dtype=A.dtype), A.shape).copy()]
    for _ in range(m - 1):
        powers.append(powers[-1] @ A)
    boldA = []
    for h in range(m):
        acc = np.zeros_like(A)
        for hp in range(h + 1):
            acc += c[..., hp, None, None] * powers[h - hp]
        boldA.append(acc)
    return boldA


def _bold_B_path(boldA: list, dtA: list, m: int) -> list:
    """Lower-order matrices bold_B_1..bold_B_{m-1} from the adjugate expansion."""
    boldB = []
    for h in range(m - 1):  # bold_B_{h+1}
        acc = np.zeros_like(boldA[0])
        for hp in range(m - 1 - h):
            acc += comb(m - 1 - hp, h) * (boldA[hp] @ dtA[m - 1 - h - hp])
        boldB.append(acc)
    return boldB


def assemble_path(symbol: SystemSymbol, xi, ts) -> tuple:
    """Stacked (calA, calB) along a time grid, shapes (len(ts), m^2, m^2).

    calA is real block-companion; calB is complex.  Single-point callers
    should use :func:`assemble`.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    m = symbol.m
    bxi = bracket(xi)
    A = eval_symbol_path(symbol, ts, xi)
    c = faddeev_leverrier(A)

    N = ts.size
    calA = np.zeros((N, m * m, m * m))
    block = np.zeros((N, m, m))
    for j in range(m - 1):
        block[:, j, j + 1] = bxi
    for col in range(m):
        block[:, m - 1, col] = -c[:, m - col] * bxi ** (col - m) * bxi
    for i in range(m):
        calA[:, i * m : (i + 1) * m, i * m : (i + 1) * m] = block

    dtA = _deriv_paths(symbol, xi, ts, m - 1)
    boldA = _bold_A_path(A.astype(complex), c.astype(complex), m)
    boldB = _bold_B_path(boldA, dtA, m)

    calB = np.zeros((N, m * m, m * m), dtype=complex)
    for i in range(m):
        row = i * m + (m - 1)
        for j in range(m):
            for l in range(1, m):
                calB[:, row, j * m + (l - 1)] = boldB[l - 1][:, i, j] * bxi ** (l - m)
    return calA, calB


def bold_A(symbol: SystemSymbol, h: int, t: float, xi) -> np.ndarray:
    """Adjugate coefficient sum_{h'<=h} c_{h'} A^{h-h'} at (t, xi); bold_A_0 = I."""
    if not 0 <= h <= symbol.m - 1:
        raise DomainError(f"h={h} outside [0, {symbol.m - 1}]")
    ts = np.array([_check_t(symbol, t)])
    A = eval_symbol_path(symbol, ts, xi).astype(complex)
    c = faddeev_leverrier(A)
    return _bold_A_path(A, c, symbol.m)[h][0]


def bold_B(symbol: SystemSymbol, l: int, t: float, xi) -> np.ndarray:
    """Lower-order matrix bold_B_l, 1 <= l <= m-1, with D_t^k = (-i)^k d^k/dt^k."""
    m = symbol.m
    if not 1 <= l <= m - 1:
        raise DomainError(f"l={l} outside [1, {m - 1}]")
    ts = np.array([_check_t(symbol, t)])
    A = eval_symbol_path(symbol, ts, xi).astype(complex)
    c = faddeev_leverrier(A)
    boldA = _bold_A_path(A, c, m)
    dtA = _deriv_paths(symbol, xi, ts, m - 1)
    return _bold_B_path(boldA, dtA, m)[l - 1][0]


def _check_t(symbol: SystemSymbol, t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= symbol.horizon:
        raise DomainError(f"t={t} outside [0, {symbol.horizon}]")
    return t


def assemble(symbol: SystemSymbol, t: float, xi) -> ReducedSystem:
    """Assemble the reduced pair and its building blocks at one (t, xi)."""
    t = _check_t(symbol, t)
    ts = np.array([t])
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    calA, calB = assemble_path(symbol, xi_arr, ts)
    m = symbol.m
    A = eval_symbol_path(symbol, ts, xi_arr).astype(complex)
    c = faddeev_leverrier(A)
    boldA = _bold_A_path(A, c, m)
    boldB = _bold_B_path(boldA, _deriv_paths(symbol, xi_arr, ts, m - 1), m)
    return ReducedSystem(
        m=m,
        t=t,
        xi=xi_arr,
        calA=calA[0],
        calB=calB[0],
        bold_A=tuple(B[0] for B in boldA),
        bold_B=tuple(B[0] for B in boldB),
        char=c[0].real,
    )


def scaled_lower_order_entries(reduced: ReducedSystem) -> np.ndarray:
    """Entries b_{ij}^{(l)} of calB as an (m-1, m, m) array, already <xi>-scaled.

    ``out[l-1, i, j]`` is the entry multiplying V_{(j-1)m + l} in the last
    row of band i; the columns at positions m, 2m, ..., m^2 vanish because
    the original system is homogeneous.
    """
    m = reduced.m
    out = np.zeros((m - 1, m, m), dtype=complex)
    for l in range(1, m):
        for i in range(m):
            for j in range(m):
                out[l - 1, i, j] = reduced.calB[i * m + m - 1, j * m + (l - 1)]
    return out


def derivative_maps(symbol: SystemSymbol, xi, ts, top: int) -> list:
    """Matrices P_j(t) with D_t^j u-hat = P_j u-hat along exact solutions.

    Built from the Leibniz recursion
    P_0 = I,  P_j = sum_l binom(j-1, l) (D_t^l A) P_{j-1-l};
    shape of each entry is (len(ts), m, m).
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    dtA = _deriv_paths(symbol, xi, ts, max(top - 1, 0))
    m = symbol.m
    maps = [np.broadcast_to(np.eye(m, dtype=complex), (ts.size, m, m)).copy()]
    for j in range(1, top + 1):
        acc = np.zeros((ts.size, m, m), dtype=complex)
        for l in range(j):
            acc += comb(j - 1, l) * (dtA[l] @ maps[j - 1 - l])
        maps.append(acc)
    return maps


def transform_initial_data(symbol: SystemSymbol, u0hat, xi) -> StateVector:
    """Initial reduced state from u-hat(0, xi).

    Time derivatives at t = 0 are generated recursively from the equation
    D_t u-hat = A u-hat, then component (i, j) is scaled by <xi>^{m-j}.
    """
    u0 = np.asarray(u0hat, dtype=complex).ravel()
    m = symbol.m
    if u0.size != m:
        raise DomainError(f"initial data must have {m} components, got {u0.size}")
    bxi = bracket(xi)
    maps = derivative_maps(symbol, xi, np.array([0.0]), m - 1)
    V = np.zeros(m * m, dtype=complex)
    for j in range(1, m + 1):
        dt_u = maps[j - 1][0] @ u0
        for i in range(m):
            V[i * m + (j - 1)] = bxi ** (m - j) * dt_u[i]
    return StateVector(V=V, m=m)


def lift_trajectory(symbol: SystemSymbol, xi, ts, u_hat_traj: np.ndarray) -> np.ndarray:
    """Reduced states U(t_k) built from a u-hat trajectory, shape (N, m^2)."""
    ts = np.asarray(ts, dtype=float)
    traj = np.asarray(u_hat_traj, dtype=complex)
    m = symbol.m
    if traj.shape != (ts.size, m):
        raise DomainError(
            f"trajectory shape {traj.shape} does not match grid ({ts.size}, {m})"
        )
    bxi = bracket(xi)
    maps = derivative_maps(symbol, xi, ts, m - 1)
    U = np.zeros((ts.size, m * m), dtype=complex)
    for j in range(1, m + 1):
        dt_u = np.einsum("tij,tj->ti", maps[j - 1], traj)
        for i in range(m):
            U[:, i * m + (j - 1)] = bxi ** (m - j) * dt_u[:, i]
    return U


def reduction_residual(symbol: SystemSymbol, xi, t_grid, u_hat_traj) -> float:
    """Ground-truth check of the reduction against a direct trajectory.

    Builds U(t) from the u-hat trajectory, differentiates it in time with a
    five-point fourth-order stencil, and returns the largest value of
    ||D_t U - (calA + calB) U|| / (1 + ||U||) over the interior grid.  For a
    trajectory from a fourth-order integrator the residual decays at fourth
    order in the step.
    """
    ts = np.asarray(t_grid, dtype=float)
    if ts.ndim != 1 or ts.size < 5:
        raise DomainError("need a 1-d time grid with at least 5 points")
    steps = np.diff(ts)
    h = steps[0]
    if not np.allclose(steps, h, rtol=1e-9, atol=1e-15):
        raise DomainError("time grid must be uniform")
    U = lift_trajectory(symbol, xi, ts, u_hat_traj)
    # Fourth-order central difference; D_t = -i d/dt.
    dU = (U[:-4] - 8.0 * U[1:-3] + 8.0 * U[3:-1] - U[4:]) / (12.0 * h)
    DtU = -1j * dU
    calA, calB = assemble_path(symbol, xi, ts[2:-2])
    rhs = np.einsum("tij,tj->ti", calA + calB, U[2:-2])
    num = np.linalg.norm(DtU - rhs, axis=1)
    den = 1.0 + np.linalg.norm(U[2:-2], axis=1)
    return float((num / den).max())
