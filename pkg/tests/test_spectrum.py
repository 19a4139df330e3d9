import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from fermi_seas.errors import InvalidParameters
from fermi_seas.spectrum import (ModelParams, Phase, characteristic_wavenumbers,
                                 classify_phase, current_density, dispersion,
                                 fermi_seas, magnetization, mode_current)

fields = st.floats(0.0, 2.0)
drives = st.floats(0.0, 3.0)


def sampled_seas(p, n=10**6):
    """Occupied runs found by sign sampling on a uniform grid (independent oracle)."""
    k = -math.pi + 2 * math.pi * (np.arange(n) + 0.5) / n
    occ = dispersion(k, p) < 0
    edges = np.flatnonzero(np.diff(occ.astype(int)))
    runs = []
    start = k[0] if occ[0] else None
    for e in edges:
        mid = 0.5 * (k[e] + k[e + 1])
        if occ[e]:
            runs.append((start, mid))
            start = None
        else:
            start = mid
    if start is not None:
        runs.append((start, k[-1]))
    return runs


@pytest.mark.parametrize("k,h,lam,expected", [
    (0.0, 0.0, 0.0, -1.0),
    (math.pi / 2, 0.5, 2.0, 0.5),
    (2 * math.pi / 3, 0.5, 1.3, 0.0),
])
def test_dispersion_examples(k, h, lam, expected):
    assert dispersion(k, ModelParams(h, lam)) == pytest.approx(expected, abs=1e-12)


@given(st.floats(-math.pi, math.pi), fields, drives)
def test_dispersion_reflection(k, h, lam):
    p = ModelParams(h, lam)
    assert dispersion(-k, p) == pytest.approx((-math.cos(k) - h) * (1 + lam * math.sin(k)), abs=1e-12)
    if lam == 0:
        assert dispersion(-k, p) == dispersion(k, p)


def test_dispersion_factorizes_through_current():
    p = ModelParams(0.3, 1.7)
    k = np.linspace(-3, 3, 50)
    eps = -np.cos(k) - p.h
    assert np.allclose(dispersion(k, p), eps - p.lam * mode_current(k, p))


@pytest.mark.parametrize("h,lam", [(-0.1, 0.0), (0.5, -1.0), (math.nan, 1.0)])
def test_invalid_parameters(h, lam):
    with pytest.raises(InvalidParameters):
        ModelParams(h, lam)


@pytest.mark.parametrize("h,lam,seas,R", [
    (0.5, 0.0, [(-2 * math.pi / 3, 2 * math.pi / 3)], 1),
    (0.5, 1.3, [(-2.0944, 0.8776), (2.0944, 2.2640)], 2),
    (0.5, 2 / math.sqrt(3), [(-2 * math.pi / 3, math.pi / 3)], 1),
])
def test_fermi_seas_examples(h, lam, seas, R):
    p = ModelParams(h, lam)
    got = fermi_seas(p)
    assert got.R == R
    assert len(got.seas) == len(seas)
    for (a, b), (ea, eb) in zip(got.seas, seas):
        assert a == pytest.approx(ea, abs=5e-5)
        assert b == pytest.approx(eb, abs=5e-5)
    # sign-sampling oracle
    runs = sampled_seas(p)
    assert len(runs) == len(got.seas)
    for (a, b), (sa, sb) in zip(got.seas, runs):
        assert a == pytest.approx(sa, abs=1e-5)
        assert b == pytest.approx(sb, abs=1e-5)


def test_fermi_seas_high_symmetry_line_merges():
    seas = fermi_seas(ModelParams(0.5, 2 / math.sqrt(3)))
    assert seas.degenerate
    assert seas.R == 1


def test_fermi_seas_full_circle():
    seas = fermi_seas(ModelParams(1.5, 0.0))
    assert seas.is_full
    assert seas.occupied_measure == pytest.approx(2 * math.pi)
    assert seas.unoccupied() == ()
    assert seas.fermi_points == 0


def test_wraparound_sea_counts_once():
    seas = fermi_seas(ModelParams(1.2, 1.5))
    assert len(seas.seas) == 2
    assert seas.seas[0][0] == -math.pi and seas.seas[-1][1] == math.pi
    assert seas.R == 1


@settings(max_examples=200)
@given(fields, drives)
def test_endpoints_are_zeros(h, lam):
    p = ModelParams(h, lam)
    seas = fermi_seas(p)
    for a, b in seas.seas:
        for k in (a, b):
            if abs(abs(k) - math.pi) > 0:
                assert abs(dispersion(k, p)) < 1e-12
    assert 0 <= seas.occupied_measure <= 2 * math.pi + 1e-12
    lefts = [a for a, _ in seas.seas]
    assert lefts == sorted(lefts)
    for (_, b), (a, _) in zip(seas.seas[:-1], seas.seas[1:]):
        assert b < a


@given(fields, st.floats(0.0, 1.0))
def test_below_critical_drive_unchanged(h, lam):
    assert fermi_seas(ModelParams(h, lam)).seas == fermi_seas(ModelParams(h, 0.0)).seas


@pytest.mark.parametrize("h,lam", [(0.5, 1.3), (0.5, 1.1), (0.2, 4.0), (1.2, 1.5), (0.0, 1.3), (0.9, 0.5)])
def test_membership_matches_sign(h, lam):
    p = ModelParams(h, lam)
    k = np.random.default_rng(7).uniform(-math.pi, math.pi, 10**5)
    assert np.array_equal(fermi_seas(p).contains(k), dispersion(k, p) < 0)


@pytest.mark.parametrize("h,lam,k_h,k_lam", [
    (0.5, 2 / math.sqrt(3), math.pi / 6, math.pi / 6),
    (1.0, 1.0, math.pi / 2, 0.0),
    (0.6, 5 / 3, 0.6435011087932844, 0.9272952180016122),
])
def test_characteristic_wavenumbers(h, lam, k_h, k_lam):
    kw = characteristic_wavenumbers(ModelParams(h, lam))
    assert kw.k_h == pytest.approx(k_h, abs=1e-12)
    assert kw.k_lambda == pytest.approx(k_lam, abs=1e-12)
    assert math.sin(kw.k_h) == pytest.approx(h)
    assert 1 / math.cos(kw.k_lambda) == pytest.approx(lam)


def test_characteristic_wavenumbers_absent():
    kw = characteristic_wavenumbers(ModelParams(1.5, 0.5))
    assert kw.k_h is None and kw.k_lambda is None


@pytest.mark.parametrize("h,lam", [(0.5, 0.8), (1.5, 0.0), (0.0, 0.0), (0.7, 1.0)])
def test_no_current_below_onset(h, lam):
    assert current_density(ModelParams(h, lam)) == pytest.approx(0.0, abs=1e-15)


def test_current_density_quadrature():
    # adaptive quadrature of (-cos k - h) sin k over the sign-determined occupied set
    p = ModelParams(0.5, 1.3)
    expected = 0.10476915632528613
    assert current_density(p) == pytest.approx(expected, rel=1e-12)

    def f(k):
        return mode_current(k, p) * (dispersion(k, p) < 0)

    breaks = [-2 * math.pi / 3, 2 * math.pi / 3, math.asin(1 / 1.3), math.pi - math.asin(1 / 1.3)]
    val = quad(f, -math.pi, math.pi, points=breaks, limit=200, epsabs=1e-14)[0] / (2 * math.pi)
    assert val == pytest.approx(expected, rel=1e-10)


@given(st.floats(0.0, 0.99), st.floats(1.0001, 5.0))
def test_current_flows_above_onset(h, lam):
    assert current_density(ModelParams(h, lam)) > 0


@pytest.mark.parametrize("h,lam,phase", [
    (0.5, 1.1, Phase.PHASE1),
    (0.5, 1.3, Phase.PHASE2),
    (0.5, 2 / math.sqrt(3), Phase.BOUNDARY_HIGH_SYMMETRY),
    (0.5, 0.5, Phase.NO_CURRENT_CRITICAL),
    (1.5, 0.5, Phase.NO_CURRENT_POLARIZED),
    (1.2, 1.5, Phase.PHASE3),
    (0.0, 1.5, Phase.BOUNDARY_OTHER),
])
def test_classify_phase(h, lam, phase):
    assert classify_phase(ModelParams(h, lam)).phase is phase


@given(st.floats(0.01, 0.99), st.floats(1.001, 6.0))
def test_current_carrying_phases(h, lam):
    p = ModelParams(h, lam)
    label = classify_phase(p)
    seas = fermi_seas(p)
    if label.phase is Phase.BOUNDARY_HIGH_SYMMETRY:
        assert seas.R == 1
        return
    assert label.phase in (Phase.PHASE1, Phase.PHASE2)
    assert seas.R == 2
    if label.phase is Phase.PHASE2:
        # zero magnetization holds on the k_lambda > k_h side
        assert seas.occupied_measure == pytest.approx(math.pi, abs=1e-10)
        assert label.magnetization == pytest.approx(0.0, abs=1e-10)
    else:
        kw = characteristic_wavenumbers(p)
        assert seas.occupied_measure == pytest.approx(math.pi + 2 * (kw.k_h - kw.k_lambda), abs=1e-10)


def test_magnetization_polarized():
    assert magnetization(ModelParams(1.5, 0.0)) == pytest.approx(0.5)
