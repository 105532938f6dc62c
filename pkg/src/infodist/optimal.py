"""Optimal measurements and saturation of the tradeoff inequalities.

Type 1 is the ``d``-outcome measurement whose ``m``-th operator is
``(|m><m| + lam * sum_{i != m} |i><i|) / sqrt(1 + (d-1) lam**2)``; every
outcome sits at the same point of the lower boundary.  Type 2 mixes ``d``
type-1 operators at the tangent point (scaled by ``c = sqrt(I/I_T)``) with
``sqrt(1 - c**2)`` times the identity, so its average lies on the chord from
the origin to the tangent point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import optimize

from . import measures as _m
from .measures import Disturbance, Info, MeasurePair, Spectrum
from .region import LowerBoundary, NoTangentError, TangentResult, family_sigma, tangent_from_identity

__all__ = [
    "Measurement",
    "IncompleteMeasurementError",
    "SaturationReport",
    "INEQUALITIES",
    "build_type1",
    "build_type2",
    "solve_lambda_for_info",
    "check_saturation",
    "averaged_all",
    "optimal_measurement",
]

COMPLETENESS_ATOL = 1e-9
CLOSED_FORM_TOL = 1e-6
QUADRATURE_TOL = 1e-4

INEQUALITIES = ("GF", "GR", "IF", "IR")


class IncompleteMeasurementError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Measurement:
    """A complete set of measurement operators, ``sum M^dag M = I``."""

    operators: tuple
    atol: float = COMPLETENESS_ATOL
    label: str = field(default="", compare=False)

    def __post_init__(self):
        ops = tuple(np.asarray(M, dtype=complex) for M in self.operators)
        if not ops:
            raise IncompleteMeasurementError("no operators")
        d = ops[0].shape[0]
        for M in ops:
            if M.shape != (d, d):
                raise ValueError("operators must be square and share one dimension")
            if not np.any(M):
                raise IncompleteMeasurementError("zero operator in measurement")
        total = sum(M.conj().T @ M for M in ops)
        dev = float(np.max(np.abs(total - np.eye(d))))
        if dev > self.atol:
            raise IncompleteMeasurementError(f"completeness violated by {dev:.3g}")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self):
        return len(self.operators)

    @cached_property
    def _spectra(self):
        return tuple(Spectrum.from_operator(M) for M in self.operators)

    def spectra(self) -> tuple[Spectrum, ...]:
        return self._spectra

    def probabilities(self) -> np.ndarray:
        """Outcome probabilities for a completely unknown pure state."""
        return np.array([_m.outcome_probability(s) for s in self._spectra])

    def completeness_error(self) -> float:
        total = sum(M.conj().T @ M for M in self.operators)
        return float(np.max(np.abs(total - np.eye(self.dim))))


def build_type1(d: int, lam: float) -> Measurement:
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    norm = 1.0 / math.sqrt(1.0 + (d - 1) * lam * lam)
    ops = []
    for m in range(d):
        diag = np.full(d, lam)
        diag[m] = 1.0
        ops.append(np.diag(norm * diag))
    return Measurement(tuple(ops), label=f"type1(d={d}, lam={lam:.6g})")


def build_type2(d: int, target_info: float, tangent: TangentResult) -> Measurement:
    if tangent.dim != d:
        raise ValueError("tangent result belongs to another dimension")
    if not 0.0 < target_info < tangent.info:
        raise ValueError("type 2 needs 0 < I < I_T; use type 1 for I >= I_T")
    c = math.sqrt(target_info / tangent.info)
    inner = build_type1(d, tangent.lam).operators
    ops = [c * M for M in inner]
    ops.append(math.sqrt(1.0 - c * c) * np.eye(d))
    return Measurement(tuple(ops), label=f"type2(d={d}, I={target_info:.6g})")


def _info_kind(kind) -> Info:
    return kind if isinstance(kind, Info) else Info(str(kind).upper())


def _type1_info(d, kind: Info):
    def info(lam):
        return _m.info_value(Spectrum(family_sigma(d, 1, d - 1, lam)), kind, tol=1e-12)

    return info


def solve_lambda_for_info(d: int, kind, target: float) -> float:
    """``lam`` at which the type-1 measurement carries ``target`` information."""
    kind = _info_kind(kind)
    info = _type1_info(d, kind)
    top = info(0.0)
    floor = info(1.0)
    if not floor <= target <= top:
        raise ValueError(f"target {target} outside attainable range [{floor}, {top}]")
    if target == floor:
        return 1.0
    if target == top:
        return 0.0
    return float(optimize.bisect(lambda x: info(x) - target, 0.0, 1.0, xtol=1e-15, maxiter=200))


def averaged_all(meas: Measurement) -> dict[str, float]:
    """Outcome-averaged G, F, R and the additive measures of a measurement."""
    out = dict.fromkeys(("G", "F", "R", "IG", "DF", "DR", "I"), 0.0)
    for s, p in zip(meas.spectra(), meas.probabilities()):
        if p <= 0:
            continue
        vals = _m.single_outcome_measures(s, tol=1e-12)
        for key in out:
            out[key] += float(p) * getattr(vals, key)
    return out


@dataclass(frozen=True)
class SaturationReport:
    inequality: str
    left: float
    right: float
    residual: float
    tolerance: float

    def __post_init__(self):
        for name in ("left", "right", "residual"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def verdict(self) -> str:
        if abs(self.residual) <= self.tolerance:
            return "saturated"
        return "satisfied" if self.residual > 0 else "violated"

    def as_dict(self) -> dict:
        return {
            "inequality": self.inequality,
            "left": self.left,
            "right": self.right,
            "residual": self.residual,
            "verdict": self.verdict,
        }


def _gf(d, ig, df):
    g = 2.0**ig / d
    f = 2.0**-df
    left = math.sqrt(max(f - 1.0 / (d + 1), 0.0))
    right = math.sqrt(max(g - 1.0 / (d + 1), 0.0)) + math.sqrt(
        max((d - 1) * (2.0 / (d + 1) - g), 0.0)
    )
    return left, right


def _gr(d, ig, dr):
    left = (d + 1) * 2.0**ig + (d - 1) * (0.0 if math.isinf(dr) else 2.0**-dr)
    return left, 2.0 * d


def check_saturation(
    meas: Measurement,
    inequality: str,
    tangent: TangentResult | None = None,
    averages: dict | None = None,
    boundary: LowerBoundary | None = None,
) -> SaturationReport:
    """Evaluate one tradeoff inequality on the averaged measures of ``meas``.

    ``GF`` and ``GR`` relate I_G to D_F and D_R; ``IF`` and ``IR`` bound D_F
    and D_R below by the chord ``k I`` for ``I < I_T`` and by the (1, d-1)
    curve otherwise.  Pass the matching :class:`TangentResult` (or a
    prepared :class:`LowerBoundary`) to avoid recomputing it; when the curve
    has no dent near the identity the bound is the curve alone.  The
    residual is ``right - left`` (or ``D - bound``); it is nonnegative for
    every physical measurement.
    """
    inequality = inequality.upper()
    d = meas.dim
    avg = averages if averages is not None else averaged_all(meas)
    if inequality == "GF":
        left, right = _gf(d, avg["IG"], avg["DF"])
        return SaturationReport("GF", left, right, right - left, CLOSED_FORM_TOL)
    if inequality == "GR":
        left, right = _gr(d, avg["IG"], avg["DR"])
        return SaturationReport("GR", left, right, right - left, CLOSED_FORM_TOL)
    if inequality not in ("IF", "IR"):
        raise ValueError(f"unknown inequality {inequality!r}")
    dist_kind = Disturbance.DF if inequality == "IF" else Disturbance.DR
    pair = MeasurePair(Info.I, dist_kind)
    if boundary is None:
        if tangent is None:
            try:
                tangent = tangent_from_identity(d, pair)
            except NoTangentError:
                tangent = None  # convex boundary: the curve itself is the bound
        elif tangent.pair != pair or tangent.dim != d:
            raise ValueError(f"{inequality} needs the {pair} tangent result for d={d}")
        boundary = LowerBoundary(d, pair, tangent)
    dist = avg["DF" if dist_kind is Disturbance.DF else "DR"]
    bound = boundary.bound(avg["I"])
    residual = dist - bound if math.isfinite(dist) else math.inf
    return SaturationReport(inequality, dist, bound, residual, QUADRATURE_TOL)


def optimal_measurement(d: int, kind, target: float, tangent: TangentResult | None = None):
    """Minimal optimal measurement for ``target`` information.

    For I_G (or I at or above ``I_T``) this is type 1; below ``I_T`` for the
    entropy reduction it is type 2.  Returns ``(measurement, construction)``.
    """
    kind = _info_kind(kind)
    if kind is Info.I and tangent is not None and target < tangent.info:
        return build_type2(d, target, tangent), "type2"
    lam = solve_lambda_for_info(d, kind, target)
    return build_type1(d, lam), "type1"
