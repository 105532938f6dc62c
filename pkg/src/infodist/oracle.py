"""Definitional estimates of G(m), F(m), R(m) and I(m) on a finite ensemble.

The prior over the unknown pure state is replaced by ``N`` Haar-sampled
states with equal weights ``1/N``; the measures are then evaluated exactly as
defined for a discrete ensemble, with no use of the closed forms.  Standard
errors come from the sample variance of each member's contribution, using
the linearisation of the ratio ``sum(y) / sum(p(m|a))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .measures import Estimate

__all__ = [
    "HaarEnsemble",
    "ZeroProbabilityError",
    "OracleMeasures",
    "sample_haar",
    "oracle_G",
    "oracle_F",
    "oracle_R",
    "oracle_I",
    "entropy_reduction_forms",
    "oracle_full",
]


class ZeroProbabilityError(ValueError):
    """The outcome never occurs on the ensemble."""


@dataclass(frozen=True)
class HaarEnsemble:
    dim: int
    states: np.ndarray = field(repr=False)
    seed: int

    @property
    def size(self) -> int:
        return self.states.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)


def sample_haar(d: int, n: int, seed: int) -> HaarEnsemble:
    """Draw ``n`` Haar-random pure states in dimension ``d``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if n < 2:
        raise ValueError("ensemble needs at least 2 states")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return HaarEnsemble(dim=d, states=z, seed=seed)


def _likelihoods(e: HaarEnsemble, M):
    M = np.asarray(M, dtype=complex)
    if M.shape != (e.dim, e.dim):
        raise ValueError(f"operator shape {M.shape} does not match dimension {e.dim}")
    post = e.states @ M.T  # rows are M|psi(a)>
    pma = np.einsum("ij,ij->i", post.conj(), post).real
    mean = pma.mean()
    if not mean > 0:
        raise ZeroProbabilityError("p(m) = 0 on this ensemble")
    return M, post, pma, mean


def _ratio(y, pma, mean):
    """Estimate ``sum(y)/sum(pma)`` with its linearised standard error."""
    n = y.size
    value = y.sum() / pma.sum()
    resid = (y - value * pma) / mean
    return Estimate(float(value), float(resid.std(ddof=1) / math.sqrt(n)))


def oracle_G(e: HaarEnsemble, M) -> Estimate:
    """Estimation fidelity of one outcome: best guess is the likeliest member."""
    _, _, pma, mean = _likelihoods(e, M)
    best = int(np.argmax(pma))  # first maximum: lowest index wins ties
    overlap = np.abs(e.states.conj() @ e.states[best]) ** 2
    return _ratio(pma * overlap, pma, mean)


def oracle_F(e: HaarEnsemble, M) -> Estimate:
    """Operation fidelity of one outcome, using M as given (no polar removal)."""
    M, post, pma, mean = _likelihoods(e, M)
    amp = np.einsum("ij,ij->i", e.states.conj(), post)
    # p(m|a) |<psi(m,a)|psi(a)>|^2 = |<psi(a)|M|psi(a)>|^2
    return _ratio(np.abs(amp) ** 2, pma, mean)


def oracle_R(e: HaarEnsemble, M) -> Estimate:
    """Physical reversibility of one outcome; the infimum is taken spectrally."""
    M, _, pma, mean = _likelihoods(e, M)
    floor = max(float(np.linalg.eigvalsh(M.conj().T @ M)[0]), 0.0)
    value = floor / mean
    se = floor / mean**2 * pma.std(ddof=1) / math.sqrt(pma.size)
    return Estimate(value, float(se))


def entropy_reduction_forms(e: HaarEnsemble, M) -> tuple[float, float]:
    """Discrete entropy reduction in two algebraically equal forms.

    Returns ``(log2 N + sum p(a|m) log2 p(a|m),
    sum (1/N) (p(m|a)/p(m)) log2(p(m|a)/p(m)))``.
    """
    _, _, pma, mean = _likelihoods(e, M)
    n = pma.size
    post = pma / pma.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(post > 0, post * np.log2(post), 0.0)
        r = pma / mean
        lik = np.where(r > 0, r * np.log2(r), 0.0)
    return float(math.log2(n) + h.sum()), float(lik.sum() / n)


def oracle_I(e: HaarEnsemble, M) -> Estimate:
    """Entropy reduction of one outcome on the discrete ensemble."""
    _, _, pma, mean = _likelihoods(e, M)
    posterior_form, _ = entropy_reduction_forms(e, M)
    with np.errstate(divide="ignore", invalid="ignore"):
        qlogq = np.where(pma > 0, pma * np.log2(np.where(pma > 0, pma, 1.0)), 0.0)
    # I = mean(q log q)/mean(q) - log2 mean(q)
    mu1 = qlogq.mean()
    influence = qlogq / mean + pma * (-mu1 / mean**2 - 1.0 / (mean * math.log(2)))
    se = influence.std(ddof=1) / math.sqrt(pma.size)
    return Estimate(posterior_form, float(se))


class OracleMeasures(NamedTuple):
    G: float
    F: float
    R: float
    I: float  # noqa: E741


def oracle_full(e: HaarEnsemble, meas) -> OracleMeasures:
    """Whole-measurement G, F, R, I weighted by ensemble outcome probabilities."""
    totals = np.zeros(4)
    for M in meas.operators:
        _, _, _, pm = _likelihoods(e, M)
        vals = [f(e, M).value for f in (oracle_G, oracle_F, oracle_R, oracle_I)]
        totals += pm * np.array(vals)
    return OracleMeasures(*(float(x) for x in totals))
