"""Single-outcome information and disturbance measures.

Every quantity here is a function of the singular values of one measurement
operator acting on a completely unknown (Haar-distributed) pure state in
dimension ``d``.  Operators are taken in their positive form (the polar
unitary carries no information), so a :class:`Spectrum` is the only input.

Closed forms used below, with ``S2 = sum(sigma**2)`` and ``S1 = sum(sigma)``::

    p(m) = S2 / d
    G(m) = (S2 + sigma_max**2) / ((d + 1) * S2)
    F(m) = (S1**2 + S2) / ((d + 1) * S2)
    R(m) = d * sigma_min**2 / S2

All logarithms are base 2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "Estimate",
    "Spectrum",
    "Info",
    "Disturbance",
    "MeasurePair",
    "MeasurePoint",
    "OutcomeMeasures",
    "outcome_probability",
    "estimation_fidelity_single",
    "operation_fidelity_single",
    "physical_reversibility_single",
    "additive_measures_single",
    "info_value",
    "disturbance_value",
    "single_outcome_measures",
    "average_measures",
    "info_bound",
    "df_bound",
]


class Estimate(NamedTuple):
    """A numerical value with an absolute error (or standard error)."""

    value: float
    error: float


@dataclass(frozen=True)
class Spectrum:
    """Singular values of a measurement operator, sorted descending."""

    sigma: tuple

    def __post_init__(self):
        sig = np.asarray(self.sigma, dtype=float).ravel()
        if sig.size < 2:
            raise ValueError("a spectrum needs dimension d >= 2")
        if not np.all(np.isfinite(sig)):
            raise ValueError("singular values must be finite")
        if np.any(sig < 0):
            raise ValueError("singular values must be nonnegative")
        if not np.any(sig > 0):
            raise ValueError("at least one singular value must be positive")
        object.__setattr__(self, "sigma", tuple(float(x) for x in np.sort(sig)[::-1]))

    @classmethod
    def from_operator(cls, op) -> "Spectrum":
        op = np.asarray(op)
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise ValueError("operator must be a square matrix")
        offdiag = op - np.diag(np.diagonal(op))
        if not np.any(offdiag):
            return cls(np.abs(np.diagonal(op)))
        return cls(np.linalg.svd(op, compute_uv=False))

    @property
    def dim(self) -> int:
        return len(self.sigma)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.sigma)

    def scaled(self, c: float) -> "Spectrum":
        if not c > 0:
            raise ValueError("scale factor must be positive")
        return Spectrum(tuple(c * x for x in self.sigma))

    def __repr__(self):
        vals = ", ".join(f"{x:.6g}" for x in self.sigma)
        return f"Spectrum(d={self.dim}, sigma=({vals}))"


class Info(str, enum.Enum):
    G = "G"
    IG = "IG"
    I = "I"  # noqa: E741


class Disturbance(str, enum.Enum):
    ONE_MINUS_F = "1-F"
    DF = "DF"
    ONE_MINUS_R = "1-R"
    DR = "DR"


_INFO_ALIASES = {"g": Info.G, "ig": Info.IG, "i": Info.I}
_DIST_ALIASES = {
    "1-f": Disturbance.ONE_MINUS_F,
    "1mf": Disturbance.ONE_MINUS_F,
    "df": Disturbance.DF,
    "1-r": Disturbance.ONE_MINUS_R,
    "1mr": Disturbance.ONE_MINUS_R,
    "dr": Disturbance.DR,
}


@dataclass(frozen=True)
class MeasurePair:
    info: Info
    disturbance: Disturbance

    @classmethod
    def parse(cls, text: str) -> "MeasurePair":
        """Parse names such as ``"i-df"``, ``"ig-dr"`` or ``"g-1-r"``."""
        head, _, tail = text.strip().lower().partition("-")
        try:
            return cls(_INFO_ALIASES[head], _DIST_ALIASES[tail])
        except KeyError:
            raise ValueError(f"unknown measure pair {text!r}") from None

    @property
    def name(self) -> str:
        return f"{self.info.value}-{self.disturbance.value}".lower()

    @property
    def additive(self) -> bool:
        return self.info in (Info.IG, Info.I) and self.disturbance in (
            Disturbance.DF,
            Disturbance.DR,
        )

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class MeasurePoint:
    info: float
    disturbance: float
    pair: MeasurePair
    weight: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0 + 1e-12:
            raise ValueError("weight must be a probability")
        if math.isinf(self.disturbance) and self.pair.disturbance is not Disturbance.DR:
            raise ValueError("only DR may be infinite")


class OutcomeMeasures(NamedTuple):
    probability: float
    G: float
    F: float
    R: float
    IG: float
    DF: float
    DR: float
    I: float  # noqa: E741


def _sigma(s) -> np.ndarray:
    if isinstance(s, Spectrum):
        return s.array
    return np.asarray(s)


# Vectorised kernels over the last axis.  They keep the input dtype so the
# curvature code can run them in extended precision.


def _probability(sig):
    d = sig.shape[-1]
    return np.sum(sig * sig, axis=-1) / d


def _estimation_fidelity(sig):
    d = sig.shape[-1]
    s2 = np.sum(sig * sig, axis=-1)
    top = np.max(sig, axis=-1)
    return (s2 + top * top) / ((d + 1) * s2)


def _operation_fidelity(sig):
    d = sig.shape[-1]
    s1 = np.sum(sig, axis=-1)
    s2 = np.sum(sig * sig, axis=-1)
    return (s1 * s1 + s2) / ((d + 1) * s2)


def _reversibility(sig):
    d = sig.shape[-1]
    s2 = np.sum(sig * sig, axis=-1)
    low = np.min(sig, axis=-1)
    return d * low * low / s2


def _neg_log2(x):
    x = np.asarray(x)
    with np.errstate(divide="ignore"):
        out = -np.log2(x)
    # F = 1 or R = 1 may round to 1 + eps; clip the resulting -0.0/-1e-16
    return np.maximum(out, 0)


def outcome_probability(s: Spectrum) -> float:
    """Probability of the outcome, ``sum(sigma**2) / d``, at the given scale."""
    return float(_probability(_sigma(s)))


def estimation_fidelity_single(s: Spectrum) -> float:
    return float(_estimation_fidelity(_sigma(s)))


def operation_fidelity_single(s: Spectrum) -> float:
    return float(_operation_fidelity(_sigma(s)))


def physical_reversibility_single(s: Spectrum) -> float:
    return float(_reversibility(_sigma(s)))


def additive_measures_single(s: Spectrum) -> tuple[float, float, float]:
    """Return ``(I_G, D_F, D_R)`` for one outcome; ``D_R`` may be ``inf``."""
    sig = _sigma(s)
    d = sig.shape[-1]
    ig = max(float(np.log2(d * _estimation_fidelity(sig))), 0.0)
    df = float(_neg_log2(_operation_fidelity(sig)))
    dr = float(_neg_log2(_reversibility(sig)))
    return ig, df, dr


def info_bound(d: int, kind: Info | str = Info.IG) -> float:
    """Largest single-outcome information, reached by a rank-1 projector."""
    kind = Info(kind)
    if kind is Info.G:
        return 2.0 / (d + 1)
    if kind is Info.IG:
        return math.log2(2.0 * d / (d + 1))
    harmonic = sum(1.0 / j for j in range(2, d + 1))
    return math.log2(d) - harmonic / math.log(2)


def df_bound(d: int) -> float:
    return math.log2((d + 1) / 2.0)


def info_value(s: Spectrum, kind: Info | str, **entropy_kw) -> float:
    kind = Info(kind)
    if kind is Info.G:
        return estimation_fidelity_single(s)
    if kind is Info.IG:
        return additive_measures_single(s)[0]
    from .entropy import entropy_reduction_single

    return entropy_reduction_single(s, **entropy_kw)


def disturbance_value(s: Spectrum, kind: Disturbance | str) -> float:
    kind = Disturbance(kind)
    if kind is Disturbance.ONE_MINUS_F:
        return 1.0 - operation_fidelity_single(s)
    if kind is Disturbance.ONE_MINUS_R:
        return 1.0 - physical_reversibility_single(s)
    ig, df, dr = additive_measures_single(s)
    return df if kind is Disturbance.DF else dr


def single_outcome_measures(s: Spectrum, **entropy_kw) -> OutcomeMeasures:
    from .entropy import entropy_reduction_single

    ig, df, dr = additive_measures_single(s)
    return OutcomeMeasures(
        probability=outcome_probability(s),
        G=estimation_fidelity_single(s),
        F=operation_fidelity_single(s),
        R=physical_reversibility_single(s),
        IG=ig,
        DF=df,
        DR=dr,
        I=entropy_reduction_single(s, **entropy_kw),
    )


def average_measures(meas, pair: MeasurePair, **entropy_kw) -> MeasurePoint:
    """Outcome-averaged information and disturbance of a complete measurement.

    ``meas`` needs ``spectra()`` and ``probabilities()``; see
    :class:`infodist.optimal.Measurement`.  Outcomes with zero probability are
    dropped.  An outcome with ``D_R = inf`` and ``p > 0`` makes the average
    infinite.
    """
    if isinstance(pair, str):
        pair = MeasurePair.parse(pair)
    info = 0.0
    dist = 0.0
    for s, p in zip(meas.spectra(), meas.probabilities()):
        if p <= 0:
            continue
        info += p * info_value(s, pair.info, **entropy_kw)
        dist += p * disturbance_value(s, pair.disturbance)
    return MeasurePoint(info=info, disturbance=dist, pair=pair, weight=1.0)

