"""Smooth numbers and the Dickman density.

An integer is R-smooth when its largest prime factor is at most R; the
empty product 1 counts as smooth for every R.  The asymptotic density of
X^(1/u)-smooth numbers below X is the Dickman function rho(u), computed
here by stepping the delay equation u rho'(u) = -rho(u - 1) with the
implicit trapezoid rule on a grid whose step divides 1 exactly, so the
lagged value is always an earlier grid point.
"""

from __future__ import annotations

from math import isqrt

import numpy as np

_RHO_PER_UNIT = 10_000  # grid step 1e-4
_RHO_MAX_U = 20

_rho_grid: np.ndarray | None = None
_rho_vals: np.ndarray | None = None


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def gpf_table(N: int) -> np.ndarray:
    """gpf_table(N)[x] is the greatest prime factor of x, with gpf(1) = 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    gpf = np.zeros(N + 1, dtype=np.int64)
    gpf[1] = 1
    for p in range(2, N + 1):
        if gpf[p] == 0:
            gpf[p::p] = p
    return gpf


def smooth_mask(N: int, R: int) -> np.ndarray:
    """Boolean array of length N + 1, True at R-smooth x in [1, N]."""
    if R < 2:
        raise ValueError("R must be >= 2")
    mask = gpf_table(N) <= R
    mask[0] = False
    return mask


def smooth_set(X: int, R: int) -> list[int]:
    """Sorted R-smooth integers in [1, X], including 1."""
    return [int(x) for x in np.nonzero(smooth_mask(X, R))[0]]


def _build_rho() -> tuple[np.ndarray, np.ndarray]:
    n = _RHO_PER_UNIT
    h = 1.0 / n
    grid = np.arange(n * _RHO_MAX_U + 1) * h
    vals = np.ones(grid.size)
    for unit in range(1, _RHO_MAX_U):
        base = unit * n
        lag = vals[base - n : base + 1]
        t = grid[base : base + n + 1]
        f = lag / t
        inc = (h / 2.0) * (f[:-1] + f[1:])
        vals[base + 1 : base + n + 1] = vals[base] - np.cumsum(inc)
    return grid, vals


def dickman_rho(u: float) -> float:
    """Dickman's rho on [0, 20], linear interpolation on the stepped table."""
    if u < 0 or u > _RHO_MAX_U:
        raise ValueError(f"u out of range [0, {_RHO_MAX_U}]: {u}")
    if u <= 1:
        return 1.0
    global _rho_grid, _rho_vals
    if _rho_vals is None:
        _rho_grid, _rho_vals = _build_rho()
    return float(np.interp(u, _rho_grid, _rho_vals))


def c_eta(eta: float) -> float:
    """Density constant rho(1/eta) of eta-power smooth numbers."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    return dickman_rho(1.0 / eta)
