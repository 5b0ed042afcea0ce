"""Quasi-symmetriser of a Sylvester companion matrix with real eigenvalues.

Built inductively from the unit lower-triangular matrices P(lambda): the
epsilon-parametrised Hermitian matrix

    Q_eps(lambda) = sum over permutations rho of  P_eps(lambda_rho)* P_eps(lambda_rho),
    P_eps = diag(eps^{m-1}, ..., eps, 1) P,

is coercive like eps^{2(m-1)}, almost commutes with the companion matrix, and
its eps^0 part factors through the W matrix of deleted-variable symmetric
polynomials.  The permutation sum is exact (m factorial terms), which caps the
dimension at m = 6.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from hyposym.errors import CapabilityError, DomainError
from hyposym.pencils import gen_eigvalsh, hermitian_part
from hyposym.symbols import MAX_DIMENSION, elementary_symmetric_all


def _as_lambda(lambdas) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float).ravel()
    if lam.size < 1:
        raise DomainError("need at least one eigenvalue")
    if lam.size > MAX_DIMENSION:
        raise CapabilityError(
            f"m={lam.size} exceeds the permutation-sum cap m <= {MAX_DIMENSION}"
        )
    return lam


def sylvester_companion(lambdas) -> np.ndarray:
    """Companion matrix with characteristic roots ``lambdas``.

    Ones on the superdiagonal; last row (-sigma_m, ..., -sigma_1) in the
    signed elementary-symmetric convention.
    """
    lam = _as_lambda(lambdas)
    m = lam.size
    sig = elementary_symmetric_all(lam)
    M = np.zeros((m, m))
    for j in range(m - 1):
        M[j, j + 1] = 1.0
    M[m - 1, :] = -sig[m - np.arange(m)]
    return M


def build_P(lambdas) -> np.ndarray:
    """Unit lower-triangular transfer matrix, built level by level.

    P for a single eigenvalue is [[1]]; each extension appends the row
    (sigma_{q-1}(lambda'), ..., sigma_1(lambda'), 1) built from the values
    seen so far, so the result depends only on lambdas[:-1].
    """
    lam = _as_lambda(lambdas)
    m = lam.size
    P = np.zeros((m, m))
    P[0, 0] = 1.0
    for q in range(2, m + 1):
        sig = elementary_symmetric_all(lam[: q - 1])
        P[q - 1, : q - 1] = sig[q - 1 - np.arange(q - 1)]
        P[q - 1, q - 1] = 1.0
    return P


def build_W(lambdas) -> np.ndarray:
    """Rows (sigma_{m-1}(pi_i lambda), ..., sigma_1(pi_i lambda), 1).

    pi_i deletes the i-th eigenvalue.  The eps^0 part of the quasi-symmetriser
    factors as Q_0 = (m-1)! W* W.
    """
    lam = _as_lambda(lambdas)
    m = lam.size
    W = np.zeros((m, m))
    for i in range(m):
        sig = elementary_symmetric_all(np.delete(lam, i))
        W[i, : m - 1] = sig[m - 1 - np.arange(m - 1)]
        W[i, m - 1] = 1.0
    return W


@dataclass(frozen=True)
class QuasiSymmetriser:
    """Q_eps with its eps-power decomposition and block liftings.

    ``parts[i]`` is the Hermitian positive semidefinite coefficient of
    eps^{2i}; ``Q_eps = sum_i eps^{2i} parts[i]``.  ``lifted()`` returns the
    m^2 x m^2 block-diagonal version acting on the reduced state.
    """

    m: int
    eps: float
    lambdas: np.ndarray
    Q_eps: np.ndarray
    parts: tuple
    W: np.ndarray

    def lifted(self) -> np.ndarray:
        return lift_blocks(self.Q_eps)

    def lifted_W(self) -> np.ndarray:
        return lift_blocks(self.W)


def quasi_symmetriser_parts(lambdas) -> tuple:
    """eps-power parts Q_0 ... Q_{m-1} of the permutation sum.

    Row k of P carries the weight eps^{m-1-k}, so the coefficient of
    eps^{2i} collects the outer products of row m-1-i over all permutations.
    Each part is a sum of outer products, hence positive semidefinite by
    construction.  The values are sorted before enumerating permutations so
    the summation order is canonical: the result is bitwise identical under
    any permutation of the input.
    """
    lam = np.sort(_as_lambda(lambdas))
    m = lam.size
    parts = [np.zeros((m, m)) for _ in range(m)]
    for rho in permutations(range(m)):
        P = build_P(lam[list(rho)])
        for i in range(m):
            row = P[m - 1 - i, :]
            parts[i] += np.outer(row, row)
    return tuple(parts)


def build_Q_eps(lambdas, eps: float) -> QuasiSymmetriser:
    """Assemble the quasi-symmetriser at a given eps in (0, 1]."""
    lam = _as_lambda(lambdas)
    if not 0.0 < eps <= 1.0:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    parts = quasi_symmetriser_parts(lam)
    Q = np.zeros((lam.size, lam.size))
    for i, part in enumerate(parts):
        Q += eps ** (2 * i) * part
    return QuasiSymmetriser(
        m=lam.size, eps=float(eps), lambdas=lam.copy(), Q_eps=Q, parts=parts,
        W=build_W(lam),
    )


def lift_blocks(block: np.ndarray) -> np.ndarray:
    """Block-diagonal lifting with m identical copies of an m x m block."""
    block = np.asarray(block)
    return np.kron(np.eye(block.shape[0], dtype=block.dtype), block)


def near_diagonal_constant(Q: np.ndarray) -> float:
    """Largest c0 with Q >= c0 diag(Q): the minimal eigenvalue of (Q, diag Q)."""
    Q = np.asarray(Q)
    d = np.diag(Q).real
    if np.any(d <= 0.0):
        raise DomainError("near-diagonality needs strictly positive diagonal entries")
    scale = 1.0 / np.sqrt(d)
    white = scale[:, None] * Q * scale[None, :]
    return float(np.linalg.eigvalsh(hermitian_part(white))[0])


@dataclass(frozen=True)
class PropertyReport:
    """Numeric residuals and constants for the quasi-symmetriser properties."""

    psd_min_eigs: tuple          # min eigenvalue of each eps-power part
    coercivity_constant: float   # C with C^{-1} eps^{2(m-1)} I <= Q_eps <= C I
    commutator_constant: float   # smallest C with |Q M - M* Q| <= C eps Q_eps
    recursion_residual: float    # Q_eps vs Q_0 + eps^2 sum of deleted-variable liftings
    factorization_residual: float  # ||Q_0 - (m-1)! W* W||
    det_identity_abs: float      # |det Q_0 - (m-1)! prod (l_i - l_j)^2|
    det_identity_rel: float
    diag_product_ratio: float    # prod q_{0,ii} / prod (l_i^2 + l_j^2), NaN-guarded


def verify_properties(lambdas, eps: float) -> PropertyReport:
    """Measure all seven structure properties of Q_eps at one (lambda, eps)."""
    lam = _as_lambda(lambdas)
    m = lam.size
    qs = build_Q_eps(lam, eps)
    Q, parts, W = qs.Q_eps, qs.parts, qs.W

    psd = tuple(float(np.linalg.eigvalsh(hermitian_part(p))[0]) for p in parts)

    eigs = np.linalg.eigvalsh(hermitian_part(Q))
    lo, hi = float(eigs[0]), float(eigs[-1])
    coercivity = max(hi, eps ** (2 * (m - 1)) / lo) if lo > 0 else np.inf

    M = sylvester_companion(lam)
    comm = -1j * (Q @ M - M.T @ Q)
    gen = gen_eigvalsh(comm, Q)
    commutator = float(np.abs(gen).max() / eps)

    # Deleted-variable recursion: Q_eps = Q_0 + eps^2 sum_i lifted Q_eps(pi_i lambda).
    if m >= 2:
        acc = parts[0].copy()
        for i in range(m):
            sub = np.delete(lam, i)
            if sub.size == 1:
                sub_Q = np.array([[1.0]])
            else:
                sub_Q = build_Q_eps(sub, eps).Q_eps
            pad = np.zeros((m, m))
            pad[: m - 1, : m - 1] = sub_Q
            acc += eps ** 2 * pad
        recursion = float(np.abs(Q - acc).max())
    else:
        recursion = 0.0

    Q0 = parts[0]
    factorization = float(np.abs(Q0 - factorial(m - 1) * W.T @ W).max())

    # det W is the Vandermonde product, so det Q_0 carries ((m-1)!)^m, one
    # factorial per row of the factorization in property (v).
    vander = 1.0
    for i in range(m):
        for j in range(i + 1, m):
            vander *= (lam[i] - lam[j]) ** 2
    det_scale = float(factorial(m - 1) ** m)
    det_abs = abs(float(np.linalg.det(Q0)) - det_scale * vander)
    det_rel = det_abs / (1.0 + det_scale * abs(vander))

    pair_prod = 1.0
    for i in range(m):
        for j in range(i + 1, m):
            pair_prod *= lam[i] ** 2 + lam[j] ** 2
    diag_prod = float(np.prod(np.diag(Q0)))
    ratio = diag_prod / pair_prod if pair_prod > 0 else float("nan")

    return PropertyReport(
        psd_min_eigs=psd,
        coercivity_constant=coercivity,
        commutator_constant=commutator,
        recursion_residual=recursion,
        factorization_residual=factorization,
        det_identity_abs=det_abs,
        det_identity_rel=det_rel,
        diag_product_ratio=ratio,
    )


def sample_separation_set(m: int, bound: float, count: int, seed: int) -> np.ndarray:
    """Deterministic sample of eigenvalue tuples from the separation set.

    Rejection sampling of lambda in [-1, 1]^m subject to
    lambda_i^2 + lambda_j^2 <= bound (lambda_i - lambda_j)^2 for all pairs.
    """
    rng = np.random.default_rng(seed)
    out = np.empty((count, m))
    got = 0
    while got < count:
        cand = rng.uniform(-1.0, 1.0, size=(4 * (count - got), m))
        num = cand[:, :, None] ** 2 + cand[:, None, :] ** 2
        den = (cand[:, :, None] - cand[:, None, :]) ** 2
        iu = np.triu_indices(m, 1)
        ok = (num[:, iu[0], iu[1]] <= bound * den[:, iu[0], iu[1]]).all(axis=1)
        take = cand[ok][: count - got]
        out[got : got + take.shape[0]] = take
        got += take.shape[0]
    return out
