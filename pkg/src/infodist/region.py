"""Allowed information-disturbance regions and their lower boundary.

The operator families that trace the region boundaries are the diagonal
operators with ``k`` unit singular values, ``l`` singular values equal to
``lam`` and ``d - k - l`` zeros.  ``(k, l)`` at ``lam = 1`` is the rank
``k + l`` projector, at ``lam = 0`` the rank ``k`` projector.  The curve
``(1, d - 1)`` is the lower boundary of every single-outcome region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import optimize

from . import measures as _m
from .entropy import entropy_reduction_single
from .hull import HullRegion, convex_hull
from .measures import Disturbance, Info, MeasurePair, MeasurePoint, Spectrum

__all__ = [
    "BoundaryCurve",
    "ProjectorPoint",
    "TangentResult",
    "DecreasePoint",
    "SingleOutcomeRegion",
    "CurvatureClassificationError",
    "NoTangentError",
    "TABLE1_PAIRS",
    "family_spectrum",
    "projector_point",
    "trace_curve",
    "single_outcome_region",
    "averaged_region",
    "random_spectra",
    "curvature_profile",
    "curvature_sign",
    "curvature_table",
    "tangent_from_identity",
    "LowerBoundary",
    "decrease_profile",
]

CURVATURE_STEP = 1e-3
CURVATURE_ZERO = 1e-8
DEFAULT_WINDOW = (0.05, 0.95)

# (info, disturbance) combinations with a populated sign in the curvature table
TABLE1_PAIRS = [
    MeasurePair(Info.G, Disturbance.ONE_MINUS_F),
    MeasurePair(Info.G, Disturbance.ONE_MINUS_R),
    MeasurePair(Info.IG, Disturbance.DF),
    MeasurePair(Info.IG, Disturbance.DR),
    MeasurePair(Info.I, Disturbance.ONE_MINUS_F),
    MeasurePair(Info.I, Disturbance.DF),
    MeasurePair(Info.I, Disturbance.ONE_MINUS_R),
    MeasurePair(Info.I, Disturbance.DR),
]


class CurvatureClassificationError(RuntimeError):
    """The sampled curvature fits none of the four sign classes."""


class NoTangentError(RuntimeError):
    """No line from the origin touches the lower boundary from below."""


def _pair(pair) -> MeasurePair:
    return MeasurePair.parse(pair) if isinstance(pair, str) else pair


def _check_family(d, k, l):
    if d < 2 or k < 1 or l < 1 or k + l > d:
        raise ValueError(f"invalid family (k={k}, l={l}) for d={d}")


def family_sigma(d, k, l, lam, dtype=float):
    return np.array([1] * k + [lam] * l + [0] * (d - k - l), dtype=dtype)


def family_spectrum(d: int, k: int, l: int, lam: float) -> Spectrum:
    _check_family(d, k, l)
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lam must lie in [0, 1]")
    return Spectrum(family_sigma(d, k, l, lam))


@dataclass(frozen=True)
class ProjectorPoint:
    dim: int
    rank: int
    point: MeasurePoint


def projector_point(d: int, r: int, pair) -> ProjectorPoint:
    pair = _pair(pair)
    if not 1 <= r <= d:
        raise ValueError("rank must lie in 1..d")
    s = Spectrum([1.0] * r + [0.0] * (d - r))
    pt = MeasurePoint(
        _m.info_value(s, pair.info),
        _m.disturbance_value(s, pair.disturbance),
        pair,
        weight=_m.outcome_probability(s),
    )
    return ProjectorPoint(d, r, pt)


def _kernel_info(sig, kind: Info, tol):
    d = sig.shape[-1]
    if kind is Info.G:
        return _m._estimation_fidelity(sig)
    if kind is Info.IG:
        return np.log2(d * _m._estimation_fidelity(sig))
    return entropy_reduction_single(Spectrum(np.asarray(sig, dtype=float)), tol=tol)


def _kernel_dist(sig, kind: Disturbance):
    if kind is Disturbance.ONE_MINUS_F:
        return 1 - _m._operation_fidelity(sig)
    if kind is Disturbance.DF:
        return -np.log2(_m._operation_fidelity(sig))
    if kind is Disturbance.ONE_MINUS_R:
        return 1 - _m._reversibility(sig)
    with np.errstate(divide="ignore"):
        return -np.log2(_m._reversibility(sig))


def _family_funcs(d, k, l, pair: MeasurePair, dtype=float, tol=1e-12):
    def info(lam):
        return _kernel_info(family_sigma(d, k, l, lam, dtype), pair.info, tol)

    def dist(lam):
        return _kernel_dist(family_sigma(d, k, l, lam, dtype), pair.disturbance)

    return info, dist


@dataclass(frozen=True)
class BoundaryCurve:
    dim: int
    k: int
    l: int  # noqa: E741
    pair: MeasurePair
    lam: np.ndarray = field(repr=False)
    info: np.ndarray = field(repr=False)
    disturbance: np.ndarray = field(repr=False)

    @property
    def name(self) -> str:
        return f"({self.k},{self.l})"

    @property
    def off_plane(self) -> bool:
        """True when every sample has infinite disturbance."""
        return not np.any(np.isfinite(self.disturbance))

    def points(self) -> np.ndarray:
        return np.column_stack([self.info, self.disturbance])


GRID_SPACINGS = ("uniform", "one", "ends")


def _lambda_grid(n, spacing):
    u = np.linspace(0.0, 1.0, n)
    if spacing == "one":
        # cluster samples near lam = 1, where the curvature analysis happens
        return 1.0 - (1.0 - u) ** 2
    if spacing == "ends":
        # cosine spacing resolves the steep ends (D_R diverges as lam -> 0)
        return 0.5 * (1.0 - np.cos(np.pi * u))
    if spacing != "uniform":
        raise ValueError(f"spacing must be one of {GRID_SPACINGS}")
    return u


def trace_curve(d, k, l, pair, grid_size=1001, spacing="uniform") -> BoundaryCurve:
    """Sample the family ``(k, l)`` on a grid of ``lam`` in ``[0, 1]``.

    ``spacing`` is ``"uniform"``, ``"one"`` (denser towards ``lam = 1``) or
    ``"ends"`` (cosine spacing, denser at both ends).
    """
    _check_family(d, k, l)
    if grid_size < 3:
        raise ValueError("grid_size must be at least 3")
    pair = _pair(pair)
    lam = _lambda_grid(grid_size, spacing)
    info_f, dist_f = _family_funcs(d, k, l, pair, tol=1e-10)
    info = np.array([float(info_f(x)) for x in lam])
    dist = np.array([float(dist_f(x)) for x in lam])
    if pair.disturbance is Disturbance.DR and k + l < d:
        dist[:] = np.inf
    return BoundaryCurve(d, k, l, pair, lam, info, dist)


def random_spectra(d: int, n: int, seed: int) -> np.ndarray:
    """Random singular-value profiles, half sorted-uniform, half Dirichlet on sigma**2."""
    rng = np.random.default_rng(seed)
    n1 = n // 2
    a = rng.uniform(size=(n1, d))
    b = np.sqrt(rng.dirichlet(np.ones(d), size=n - n1))
    sig = np.vstack([a, b])
    sig = -np.sort(-sig, axis=1)
    sig[sig[:, 0] == 0, 0] = 1.0
    return sig


def _point_for(sig, pair: MeasurePair):
    s = Spectrum(sig)
    return _m.info_value(s, pair.info), _m.disturbance_value(s, pair.disturbance)


@dataclass
class SingleOutcomeRegion:
    dim: int
    pair: MeasurePair
    cloud: np.ndarray = field(repr=False)
    curves: dict = field(repr=False)
    projectors: list = field(repr=False)

    @property
    def lower_name(self) -> str:
        return f"(1,{self.dim - 1})"

    @property
    def upper_names(self) -> list[str]:
        if self.pair.disturbance is Disturbance.DR:
            return [f"({self.dim - 1},1)"]
        return [f"({k},1)" for k in range(self.dim - 1, 0, -1)]

    def finite_points(self) -> np.ndarray:
        parts = [self.cloud] + [c.points() for c in self.curves.values()]
        parts.append(np.array([[p.point.info, p.point.disturbance] for p in self.projectors]))
        pts = np.vstack(parts)
        return pts[np.all(np.isfinite(pts), axis=1)]


def single_outcome_region(d, pair, resolution=1001, n_random=5000, seed=0) -> SingleOutcomeRegion:
    """Random operators plus every boundary family for one measure pair.

    ``resolution`` is the number of ``lam`` samples per family curve (cosine
    spaced); the random cloud has ``n_random`` points.
    """
    if resolution < 10:
        raise ValueError("resolution must be at least 10")
    pair = _pair(pair)
    cloud = np.array([_point_for(s, pair) for s in random_spectra(d, n_random, seed)])
    curves = {}
    for k in range(1, d):
        for l in range(1, d - k + 1):  # noqa: E741
            c = trace_curve(d, k, l, pair, grid_size=resolution, spacing="ends")
            curves[c.name] = c
    projectors = [projector_point(d, r, pair) for r in range(1, d + 1)]
    return SingleOutcomeRegion(d, pair, cloud.reshape(-1, 2), curves, projectors)


def averaged_region(region: SingleOutcomeRegion) -> HullRegion:
    """Convex hull of a single-outcome region: all outcome-averaged values."""
    # D_R diverges as sigma_min -> 0, so DR regions are open upward
    unbounded = region.pair.disturbance is Disturbance.DR
    return convex_hull(region.finite_points(), unbounded=unbounded, pair=region.pair, dim=region.dim)


# ---------------------------------------------------------------- curvature


def _fd(f, x, h):
    fp, f0, fm = f(x + h), f(x), f(x - h)
    return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)


def _richardson(f, x, h):
    a1, a2 = _fd(f, x, h)
    b1, b2 = _fd(f, x, h / 2)
    return (4 * b1 - a1) / 3, (4 * b2 - a2) / 3


def curvature_profile(d, pair, lams, h=CURVATURE_STEP) -> np.ndarray:
    """Second derivative of disturbance with respect to information on (1, d-1).

    Parametric derivatives in ``lam`` come from centred differences with step
    ``h``, Richardson-extrapolated once.  Closed-form measures are evaluated
    in extended precision so an exactly linear boundary reads as ~0.
    """
    pair = _pair(pair)
    dtype = float if pair.info is Info.I else np.longdouble
    info_f, dist_f = _family_funcs(d, 1, d - 1, pair, dtype=dtype, tol=1e-13)
    out = []
    for lam in np.asarray(lams, dtype=float):
        x = dtype(lam)
        i1, i2 = _richardson(info_f, x, dtype(h))
        d1, d2 = _richardson(dist_f, x, dtype(h))
        out.append(float((d2 * i1 - d1 * i2) / i1**3))
    return np.array(out)


def _classify(lams, curv, zero_tol):
    order = np.argsort(lams)[::-1]  # from the identity (lam = 1) outward
    c = curv[order]
    sign = np.where(np.abs(c) < zero_tol, 0, np.sign(c)).astype(int)
    if np.all(sign == 0):
        return "0"
    if np.all(sign > 0):
        return "+"
    if np.all(sign < 0):
        return "-"
    nz = sign[sign != 0]
    flips = np.count_nonzero(np.diff(nz))
    if flips == 1 and nz[0] < 0:
        return "∓"
    return None


def curvature_sign(d, pair, window=DEFAULT_WINDOW, n_points=97, zero_tol=CURVATURE_ZERO) -> str:
    """Classify the curvature of (1, d-1) as ``"+"``, ``"-"``, ``"0"`` or ``"∓"``.

    ``"∓"`` means negative next to the identity (large ``lam``) and positive
    farther out.  Raises :class:`CurvatureClassificationError` otherwise.
    """
    lo, hi = window
    if not 0.0 < lo < hi < 1.0:
        raise ValueError("window must lie strictly inside (0, 1)")
    lams = np.linspace(lo, hi, n_points)
    curv = curvature_profile(d, pair, lams)
    result = _classify(lams, curv, zero_tol)
    if result is None:
        raise CurvatureClassificationError(
            f"curvature of (1,{d - 1}) for {_pair(pair)} fits no sign class"
        )
    return result


def curvature_table(d, **kw) -> dict[str, str]:
    return {p.name: curvature_sign(d, p, **kw) for p in TABLE1_PAIRS}


# ------------------------------------------------------------------ tangent


@dataclass(frozen=True)
class TangentResult:
    pair: MeasurePair
    dim: int
    lam: float
    info: float
    disturbance: float
    slope: float

    def as_dict(self) -> dict:
        return {
            "pair": self.pair.name,
            "dim": self.dim,
            "lambda_T": self.lam,
            "I_T": self.info,
            "D_T": self.disturbance,
            "slope": self.slope,
        }


def tangent_from_identity(d, pair, tol=1e-6, scan=99) -> TangentResult:
    """Touching point of the line through the origin and the curve (1, d-1).

    Solves ``D'(lam) I(lam) - D(lam) I'(lam) = 0`` by bisection on the bracket
    where ``D/I`` switches from decreasing to increasing.
    """
    return _tangent(int(d), _pair(pair), float(tol), int(scan))


@lru_cache(maxsize=64)
def _tangent(d, pair, tol, scan):
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not pair.additive or pair.info is not Info.I:
        raise NoTangentError(f"no tangent construction for {pair}")
    info_f, dist_f = _family_funcs(d, 1, d - 1, pair, tol=tol / 10)
    step = 1e-5

    def touch(lam):
        i0, d0 = info_f(lam), dist_f(lam)
        di = (info_f(lam + step) - info_f(lam - step)) / (2 * step)
        dd = (dist_f(lam + step) - dist_f(lam - step)) / (2 * step)
        return dd * i0 - d0 * di

    grid = np.linspace(0.01, 0.99, scan)
    vals = np.array([touch(x) for x in grid])
    idx = np.nonzero((vals[:-1] < 0) & (vals[1:] > 0))[0]
    if idx.size == 0:
        raise NoTangentError(f"(1,{d - 1}) is not inverted-S shaped for {pair}")
    i = idx[0]
    lam = optimize.bisect(touch, grid[i], grid[i + 1], xtol=tol)
    info, dist = float(info_f(lam)), float(dist_f(lam))
    return TangentResult(pair, d, float(lam), info, dist, dist / info)


class LowerBoundary:
    """The (1, d-1) curve as disturbance versus information.

    Information decreases monotonically in ``lam``; a tabulated grid brackets
    each inversion, which is then finished by Brent's bracketed method.
    """

    def __init__(self, d, pair, tangent: TangentResult | None = None, grid=257):
        self.dim = d
        self.pair = _pair(pair)
        self.tangent = tangent
        self._info, self._dist = _family_funcs(d, 1, d - 1, self.pair)
        self._lam = np.linspace(0.0, 1.0, grid)
        self._tab = np.array([float(self._info(x)) for x in self._lam])

    @property
    def max_info(self) -> float:
        return float(self._tab[0])

    def lam_at(self, info: float, xtol=1e-13) -> float:
        if info <= 0:
            return 1.0
        if info >= self._tab[0]:
            return 0.0
        # _tab is decreasing
        j = int(np.searchsorted(-self._tab, -info))
        lo, hi = self._lam[j - 1], self._lam[j]
        return float(optimize.brentq(lambda x: float(self._info(x)) - info, lo, hi, xtol=xtol))

    def disturbance_at(self, info: float) -> float:
        return float(self._dist(self.lam_at(info)))

    def bound(self, info: float) -> float:
        """Minimum averaged disturbance for the given averaged information."""
        t = self.tangent
        if t is not None and info < t.info:
            return t.slope * info
        return self.disturbance_at(info)


@dataclass(frozen=True)
class DecreasePoint:
    info: float
    amount: float
    rate: float


def decrease_profile(d, pair, grid=50, tangent: TangentResult | None = None) -> list[DecreasePoint]:
    """Drop in disturbance from (1, d-1) to the tangent chord at fixed information.

    ``grid`` is either a count of evenly spaced information values in
    ``(0, I_T)`` or an explicit sequence of information values.
    """
    pair = _pair(pair)
    if tangent is None:
        tangent = tangent_from_identity(d, pair)
    if np.isscalar(grid):
        n = int(grid)
        infos = tangent.info * np.arange(1, n + 1) / (n + 1)
    else:
        infos = np.asarray(grid, dtype=float)
    curve = LowerBoundary(d, pair)
    out = []
    for x in infos:
        if x >= tangent.info:
            out.append(DecreasePoint(float(x), 0.0, 0.0))
            continue
        on_curve = curve.disturbance_at(x)
        amount = on_curve - tangent.slope * x
        out.append(DecreasePoint(float(x), float(amount), float(amount / on_curve)))
    return out

