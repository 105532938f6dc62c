"""Entropy reduction I(m) of a single outcome for a Haar-random pure state.

With ``x_i = |<i|psi>|**2`` and ``q = sum(sigma_i**2 * x_i)`` the outcome
likelihood, the entropy reduction is ``E[(q/qbar) log2(q/qbar)]``.  Under the
Haar measure ``x`` is uniform on the simplex, i.e. Dirichlet(1, ..., 1).
Grouping equal singular values turns this into a Dirichlet average whose
linear functional ``q`` has a B-spline density with knots at the distinct
``sigma_i**2`` (repeated by multiplicity).  That reduces every spectrum to a
one-dimensional integral, evaluated here by composite Gauss-Legendre rules on
a mesh graded toward ``q = 0`` where ``q log q`` is not analytic.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.interpolate import BSpline

from .measures import Estimate, Spectrum

__all__ = [
    "entropy_reduction_single",
    "entropy_reduction_estimate",
    "entropy_bound",
    "group_levels",
]

DEFAULT_QUAD_TOL = 1e-6
DEFAULT_MC_SE = 1e-4
LEVEL_RTOL = 1e-12

_GRADING = 0.25
_ZERO_CUTOFF = 1e-12
_MC_CHUNK = 1 << 16
_MC_MAX = 1 << 26


def entropy_bound(d: int) -> float:
    """Upper bound ``log2 d - (1/ln 2) * (1/2 + ... + 1/d)``."""
    return math.log2(d) - sum(1.0 / j for j in range(2, d + 1)) / math.log(2)


def group_levels(a, rtol: float = LEVEL_RTOL):
    """Merge nearly equal values of ``a``; returns ascending levels and counts."""
    a = np.sort(np.asarray(a, dtype=float))
    scale = a[-1]
    levels, counts = [a[0]], [1]
    sums = [a[0]]
    for x in a[1:]:
        if x - levels[-1] <= rtol * scale:
            counts[-1] += 1
            sums[-1] += x
            levels[-1] = sums[-1] / counts[-1]
        else:
            levels.append(x)
            counts.append(1)
            sums.append(x)
    levels = np.array(levels)
    # a level at round-off distance from zero is zero
    levels[levels <= rtol * scale] = 0.0
    return levels, np.array(counts)


def _normalised_levels(s: Spectrum):
    a = np.square(s.array)
    a = a / a.mean()  # qbar = 1
    return group_levels(a)


@lru_cache(maxsize=None)
def _gl_nodes(n):
    return np.polynomial.legendre.leggauss(n)


def _mesh(levels):
    """Integration breakpoints: distinct knots plus geometric grading to 0."""
    pts = {float(levels[0])}
    for lo, hi in zip(levels[:-1], levels[1:]):
        pts.add(float(hi))
        floor = lo if lo > 0 else hi * _ZERO_CUTOFF
        p = hi * _GRADING
        while p > floor:
            pts.add(p)
            p *= _GRADING
    return np.array(sorted(pts))


def _quad_on_mesh(density, mesh, n):
    x, w = _gl_nodes(n)
    a, b = mesh[:-1, None], mesh[1:, None]
    half = 0.5 * (b - a)
    t = (0.5 * (a + b) + half * x).ravel()
    wt = (half * w).ravel()
    rho = density(t)
    f = np.where(t > 0, t * np.log2(np.where(t > 0, t, 1.0)), 0.0)
    return float(np.sum(wt * rho * f))


def _quadrature(levels, counts, tol):
    d = int(counts.sum())
    knots = np.repeat(levels, counts)
    spline = BSpline.basis_element(knots, extrapolate=False)
    norm = (d - 1) / (knots[-1] - knots[0])

    def density(t):
        # nodes are interior to the support, so no NaN from extrapolate=False
        return spline(t) * norm

    mesh = _mesh(levels)
    n = 16
    coarse = _quad_on_mesh(density, mesh, n)
    while True:
        fine = _quad_on_mesh(density, mesh, 2 * n)
        err = abs(fine - coarse)
        if err <= tol or n >= 128:
            return Estimate(max(fine, 0.0), err)
        n *= 2
        coarse = fine


def _montecarlo(levels, counts, target_se, seed):
    a = np.repeat(levels, counts)
    rng = np.random.default_rng(seed)
    total = total_sq = 0.0
    n = 0
    while n < _MC_MAX:
        e = rng.standard_exponential((_MC_CHUNK, a.size))
        q = (e @ a) / e.sum(axis=1)
        v = np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
        total += v.sum()
        total_sq += np.dot(v, v)
        n += _MC_CHUNK
        mean = total / n
        var = max(total_sq / n - mean * mean, 0.0) * n / (n - 1)
        se = math.sqrt(var / n)
        if se <= target_se:
            break
    return Estimate(float(mean), se)


def entropy_reduction_estimate(
    s: Spectrum, method: str = "quadrature", tol: float | None = None, seed: int = 0
) -> Estimate:
    """Entropy reduction with its error.

    Parameters
    ----------
    s : Spectrum
        Singular values of the measurement operator.
    method : {"quadrature", "montecarlo"}
        Quadrature returns an absolute error estimate (difference between two
        rule orders); Monte Carlo returns the achieved standard error.
    tol : float, optional
        Absolute tolerance for quadrature (default 1e-6) or target standard
        error for Monte Carlo (default 1e-4).
    seed : int
        Seed for the Monte Carlo stream.
    """
    if not isinstance(s, Spectrum):
        s = Spectrum(s)
    if method not in ("quadrature", "montecarlo"):
        raise ValueError(f"unknown method {method!r}")
    if tol is None:
        tol = DEFAULT_QUAD_TOL if method == "quadrature" else DEFAULT_MC_SE
    if not tol > 0:
        raise ValueError("tol must be positive")
    levels, counts = _normalised_levels(s)
    if levels.size == 1:
        return Estimate(0.0, 0.0)
    if method == "quadrature":
        return _quadrature(levels, counts, tol)
    return _montecarlo(levels, counts, tol, seed)


def entropy_reduction_single(
    s: Spectrum, method: str = "quadrature", tol: float | None = None, seed: int = 0
) -> float:
    """Entropy reduction I(m) in bits; see :func:`entropy_reduction_estimate`."""
    return entropy_reduction_estimate(s, method=method, tol=tol, seed=seed).value
