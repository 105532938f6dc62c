import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infodist.measures import (
    Disturbance,
    Info,
    MeasurePair,
    MeasurePoint,
    Spectrum,
    additive_measures_single,
    df_bound,
    estimation_fidelity_single,
    info_bound,
    operation_fidelity_single,
    outcome_probability,
    physical_reversibility_single,
    single_outcome_measures,
)
from infodist.oracle import oracle_F, oracle_G, oracle_R, sample_haar
from infodist.region import family_sigma


def spectra(min_d=2, max_d=6):
    return st.integers(min_d, max_d).flatmap(
        lambda d: st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=d, max_size=d).filter(
            lambda v: max(v) > 1e-3
        )
    )


def test_spectrum_sorted_and_validated():
    s = Spectrum([0.2, 1.0, 0.5])
    assert s.sigma == (1.0, 0.5, 0.2)
    assert s.dim == 3
    for bad in ([1.0], [0.0, 0.0], [1.0, -0.1], [1.0, np.nan]):
        with pytest.raises(ValueError):
            Spectrum(bad)


def test_from_operator_uses_singular_values():
    rng = np.random.default_rng(4)
    u, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    v, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    M = u @ np.diag([0.9, 0.4, 0.1]) @ v
    np.testing.assert_allclose(Spectrum.from_operator(M).sigma, [0.9, 0.4, 0.1], atol=1e-12)
    assert Spectrum.from_operator(np.diag([-0.5, 0.3])).sigma == (0.5, 0.3)


@pytest.mark.parametrize("text, info, dist", [
    ("i-df", Info.I, Disturbance.DF),
    ("ig-dr", Info.IG, Disturbance.DR),
    ("g-1-f", Info.G, Disturbance.ONE_MINUS_F),
    ("I-1-R", Info.I, Disturbance.ONE_MINUS_R),
])
def test_pair_parse(text, info, dist):
    pair = MeasurePair.parse(text)
    assert (pair.info, pair.disturbance) == (info, dist)
    assert MeasurePair.parse(pair.name) == pair


def test_pair_additivity():
    assert MeasurePair.parse("ig-df").additive
    assert not MeasurePair.parse("g-1-f").additive


def test_measure_point_rejects_infinite_non_dr():
    MeasurePoint(0.1, math.inf, MeasurePair.parse("i-dr"), 1.0)
    with pytest.raises(ValueError):
        MeasurePoint(0.1, math.inf, MeasurePair.parse("i-df"), 1.0)


@pytest.mark.parametrize("d", [2, 3, 4, 7])
def test_projector_and_identity(d):
    proj = Spectrum([1.0] + [0.0] * (d - 1))
    ig, df, dr = additive_measures_single(proj)
    assert ig == pytest.approx(math.log2(2 * d / (d + 1)), abs=1e-12)
    assert df == pytest.approx(math.log2((d + 1) / 2), abs=1e-12)
    assert dr == math.inf
    assert outcome_probability(proj) == pytest.approx(1 / d)
    ident = Spectrum([1.0] * d)
    assert additive_measures_single(ident) == (0.0, 0.0, 0.0)
    assert single_outcome_measures(ident).I == 0.0


def test_hand_values_d3():
    s = Spectrum([1.0, 0.5, 0.5])  # S2 = 1.5, S1 = 2
    assert outcome_probability(s) == pytest.approx(0.5)
    assert estimation_fidelity_single(s) == pytest.approx(2.5 / 6)
    assert operation_fidelity_single(s) == pytest.approx(5.5 / 6)
    assert physical_reversibility_single(s) == pytest.approx(0.5)


@given(spectra(), st.floats(0.01, 100.0))
def test_scale_invariance(sig, c):
    a = single_outcome_measures(Spectrum(sig), tol=1e-9)
    b = single_outcome_measures(Spectrum([c * x for x in sig]), tol=1e-9)
    for name in ("G", "F", "R", "IG", "DF", "DR"):
        assert getattr(a, name) == pytest.approx(getattr(b, name), rel=1e-10, abs=1e-12)
    assert a.I == pytest.approx(b.I, abs=1e-8)
    assert b.probability == pytest.approx(c * c * a.probability, rel=1e-10)


@settings(max_examples=200)
@given(spectra())
def test_bounds(sig):
    s = Spectrum(sig)
    d = s.dim
    v = single_outcome_measures(s)
    assert 1 / d - 1e-12 <= v.G <= 2 / (d + 1) + 1e-12
    assert 2 / (d + 1) - 1e-12 <= v.F <= 1 + 1e-12
    assert 0 <= v.R <= 1 + 1e-12
    assert 0 <= v.IG <= info_bound(d, "IG") + 1e-12
    assert 0 <= v.DF <= df_bound(d) + 1e-12
    assert v.DR >= 0
    assert -1e-9 <= v.I <= info_bound(d, "I") + 1e-9


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_monotone_along_lower_family(d):
    lam = np.linspace(0, 1, 41)
    vals = [single_outcome_measures(Spectrum(family_sigma(d, 1, d - 1, x))) for x in lam]
    for name in ("IG", "DF", "I"):
        seq = np.array([getattr(v, name) for v in vals])
        assert np.all(np.diff(seq) <= 1e-12), name
    dr = np.array([v.DR for v in vals])
    assert np.all(np.diff(dr[1:]) <= 1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_linear_identity_between_g_and_r(d):
    for lam in np.linspace(0, 1, 101):
        s = Spectrum(family_sigma(d, 1, d - 1, lam))
        g = estimation_fidelity_single(s)
        r = physical_reversibility_single(s)
        assert (d + 1) * d * g + (d - 1) * r == pytest.approx(2 * d, abs=1e-12)


@pytest.mark.parametrize("sig", [[1.0, 0.3], [0.9, 0.6, 0.1], [1.0, 1.0, 0.5, 0.2]])
def test_matches_oracle(sig):
    s = Spectrum(sig)
    ens = sample_haar(s.dim, 40_000, 11)
    M = np.diag(s.array)
    for fn, ref in ((oracle_F, operation_fidelity_single(s)), (oracle_R, physical_reversibility_single(s))):
        est = fn(ens, M)
        assert abs(est.value - ref) <= 4 * est.error + 1e-12
    # finite ensembles bias the guess-based fidelity down, never up
    assert oracle_G(ens, M).value <= estimation_fidelity_single(s) + 1e-3
