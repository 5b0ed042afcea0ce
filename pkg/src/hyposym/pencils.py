"""Hermitian pencil helpers shared by the quasi-symmetriser and condition checks."""

from __future__ import annotations

import numpy as np

from hyposym.errors import NumericError

GEN_EIG_JITTER = 1e-12


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def gen_eigvalsh(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Eigenvalues of the Hermitian pencil (A, B) with B positive definite.

    Solves via Cholesky whitening, L^{-1} A L^{-*}; if B fails to factor, a
    diagonal jitter of 1e-12 * max|B| is added once before giving up.
    """
    A = hermitian_part(np.asarray(A))
    B = hermitian_part(np.asarray(B))
    for attempt in range(2):
        try:
            L = np.linalg.cholesky(B)
            break
        except np.linalg.LinAlgError:
            if attempt == 1:
                raise NumericError("pencil right-hand matrix is not positive definite")
            B = B + GEN_EIG_JITTER * max(np.abs(B).max(), 1.0) * np.eye(B.shape[0])
    Y = np.linalg.solve(L, A)
    W = np.linalg.solve(L, Y.conj().T).conj().T
    return np.linalg.eigvalsh(hermitian_part(W))


def rayleigh_extremes(A: np.ndarray, B: np.ndarray) -> tuple:
    """(min, max) of the generalized Rayleigh quotient of the pencil (A, B)."""
    vals = gen_eigvalsh(A, B)
    return float(vals[0]), float(vals[-1])
