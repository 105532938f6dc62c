"""Random complete measurements and fuzzing of the tradeoff inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import Disturbance, Info, MeasurePair
from .optimal import INEQUALITIES, Measurement, averaged_all, check_saturation
from .region import LowerBoundary, NoTangentError, tangent_from_identity

__all__ = ["VIOLATION_TOL", "random_measurement", "InequalityStats", "FuzzReport", "fuzz_inequalities"]

VIOLATION_TOL = 1e-6


def random_measurement(d: int, n_outcomes: int, seed) -> Measurement:
    """Kraus operators cut from a Haar-random isometry C^d -> C^(n d)."""
    if n_outcomes < 1:
        raise ValueError("need at least one outcome")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n_outcomes * d, d)) + 1j * rng.standard_normal((n_outcomes * d, d))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    blocks = tuple(q[m * d : (m + 1) * d] for m in range(n_outcomes))
    return Measurement(blocks, atol=1e-10, label=f"random(d={d}, n={n_outcomes})")


@dataclass
class InequalityStats:
    min_residual: float = math.inf
    worst_trial: int = -1
    violations: int = 0

    def update(self, trial: int, residual: float):
        if residual < self.min_residual:
            self.min_residual = residual
            self.worst_trial = trial
        if residual < -VIOLATION_TOL:
            self.violations += 1


@dataclass
class FuzzReport:
    seed: int
    trials: int
    stats: dict = field(default_factory=dict)  # d -> {inequality: InequalityStats}
    points: dict = field(default_factory=dict, repr=False)  # d -> (trials, 4) IG, DF, DR, I

    @property
    def violations(self) -> int:
        return sum(s.violations for per in self.stats.values() for s in per.values())

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials_per_dim": self.trials,
            "tolerance": VIOLATION_TOL,
            "violations": self.violations,
            "ok": self.ok,
            "dims": {
                str(d): {
                    name: {
                        "min_residual": s.min_residual,
                        "worst_trial": s.worst_trial,
                        "violations": s.violations,
                    }
                    for name, s in per.items()
                }
                for d, per in self.stats.items()
            },
        }


def fuzz_inequalities(d_list, trials: int, seed: int, keep_points: bool = False) -> FuzzReport:
    """Check all four inequalities on random measurements.

    Each trial draws the outcome count uniformly from ``1..2d``.  Every
    dimension has its own seed stream derived from ``(seed, d)``, so results
    do not depend on the order or selection of ``d_list``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    report = FuzzReport(seed=seed, trials=trials)
    for d in d_list:
        boundaries = {}
        for name, kind in (("IF", Disturbance.DF), ("IR", Disturbance.DR)):
            pair = MeasurePair(Info.I, kind)
            try:
                tangent = tangent_from_identity(d, pair)
            except NoTangentError:
                tangent = None
            boundaries[name] = LowerBoundary(d, pair, tangent)
        per = {name: InequalityStats() for name in INEQUALITIES}
        rng = np.random.default_rng([seed, d])
        pts = np.empty((trials, 4))
        for t in range(trials):
            n = int(rng.integers(1, 2 * d + 1))
            meas = random_measurement(d, n, int(rng.integers(2**63)))
            avg = averaged_all(meas)
            pts[t] = avg["IG"], avg["DF"], avg["DR"], avg["I"]
            for name in INEQUALITIES:
                res = check_saturation(meas, name, averages=avg, boundary=boundaries.get(name)).residual
                per[name].update(t, res)
        report.stats[d] = per
        if keep_points:
            report.points[d] = pts
    return report
