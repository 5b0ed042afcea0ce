"""Built-in named systems used by the CLI and the acceptance suite.

All four are 1-d in space with horizon T = 1:

* ``m2-glaeser``    -- wave-type 2x2 system with a(t) = t^2; weakly
  hyperbolic with an order-two degeneracy at t = 0, analytic coefficients.
* ``m2-wave``       -- the same system with a(t) = 1: the plain wave equation
  written as a first-order system, strictly hyperbolic.
* ``m2-nonhyp-control`` -- rotation-type control with purely imaginary
  eigenvalues; everything downstream should diagnose exponential growth.
* ``m3-tracezero``  -- 3x3 trace-free system with a(t) = t^4 whose rescaled
  eigenvalues are 0 and +/- sqrt(a(t)) xi <xi>^{-1}.
"""

from __future__ import annotations

import numpy as np

from hyposym.errors import DomainError
from hyposym.symbols import SystemSymbol


def _symbol_2x2(a_poly, sign: float = 1.0, horizon: float = 1.0) -> SystemSymbol:
    deg = len(a_poly)
    coeffs = np.zeros((1, 2, 2, max(deg, 1)))
    coeffs[0, 0, 1, 0] = 1.0
    coeffs[0, 1, 0, : deg] = sign * np.asarray(a_poly, dtype=float)
    return SystemSymbol(coeffs=coeffs, horizon=horizon)


def _symbol_tracezero(a_poly, horizon: float = 1.0) -> SystemSymbol:
    deg = len(a_poly)
    coeffs = np.zeros((1, 3, 3, max(deg, 1)))
    coeffs[0, 0, 1, : deg] = np.asarray(a_poly, dtype=float)
    coeffs[0, 1, 0, 0] = 1.0
    coeffs[0, 2, 1, 0] = 1.0
    return SystemSymbol(coeffs=coeffs, horizon=horizon)


def builtin_system(name: str) -> SystemSymbol:
    try:
        factory = BUILTIN_SYSTEMS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_SYSTEMS))
        raise DomainError(f"unknown example {name!r}; known: {known}") from None
    return factory()


BUILTIN_SYSTEMS = {
    "m2-glaeser": lambda: _symbol_2x2([0.0, 0.0, 1.0]),
    "m2-wave": lambda: _symbol_2x2([1.0]),
    "m2-nonhyp-control": lambda: _symbol_2x2([1.0], sign=-1.0),
    "m3-tracezero": lambda: _symbol_tracezero([0.0, 0.0, 0.0, 0.0, 1.0]),
}
