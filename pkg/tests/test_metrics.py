import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mimo_islr import metrics
from mimo_islr.model import AngleScenario, DegenerateError

from conftest import random_waveform


def brute_correlation(x, y, k):
    n = len(x)
    return sum(x[i] * np.conj(y[i + k]) for i in range(n) if 0 <= i + k < n)


def test_steering_vector_phase_progression():
    a = metrics.steering_vector(np.pi / 6, 4)
    np.testing.assert_allclose(a, np.exp(1j * np.pi * 0.5 * np.arange(4)))
    np.testing.assert_allclose(metrics.steering_matrix([np.pi / 6], 4)[:, 0], a)


def test_beampattern_matches_loop(rng):
    s = random_waveform(rng, 3, 5, "general")
    theta = np.array([-0.4, 0.0, 1.1])
    expected = [np.mean([abs(np.vdot(metrics.steering_vector(t, 3), s[:, n])) ** 2 for n in range(5)])
                for t in theta]
    np.testing.assert_allclose(metrics.beampattern(s, theta), expected, rtol=1e-13)
    assert isinstance(metrics.beampattern(s, 0.3), float)


def test_beampattern_single_row_is_flat(rng):
    s = random_waveform(rng, 1, 8)
    p = metrics.beampattern(s, np.linspace(-1.5, 1.5, 7))
    np.testing.assert_allclose(p, 1.0)


def test_spatial_islr_is_ratio_of_averaged_beampatterns(rng):
    sc = AngleScenario.default_scene(4, 16)
    s = random_waveform(rng, 4, 16)
    pu = metrics.beampattern(s, np.array(sc.theta_u)).mean()
    pd = metrics.beampattern(s, np.array(sc.theta_d)).mean()
    assert metrics.spatial_islr(s, sc) == pytest.approx(pu / pd, rel=1e-12)


def test_spatial_islr_degenerate():
    sc = AngleScenario.default_scene(2, 4)
    with pytest.raises(DegenerateError):
        metrics.spatial_islr(np.zeros((2, 4)), sc)


@pytest.mark.parametrize("n", [5, 20])  # direct and FFT code paths
def test_correlations_match_brute_force(rng, n):
    s = random_waveform(rng, 3, n, "general")
    r = metrics.correlations(s)
    for m in range(3):
        for l in range(3):
            for k in range(-(n - 1), n):
                want = brute_correlation(s[m], s[l], k)
                assert abs(r[m, l, k + n - 1] - want) <= 1e-11
                assert metrics.cross_correlation(s[m], s[l], k) == pytest.approx(want, abs=1e-12)


def test_cross_correlation_lag_range():
    with pytest.raises(ValueError):
        metrics.cross_correlation(np.ones(4), np.ones(4), 4)


def test_barker13_isl():
    b = np.array([1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1], dtype=complex)[None, :]
    assert metrics.range_isl(b) == pytest.approx(12.0)
    assert metrics.range_islr(b) == pytest.approx(12 / 169)


def test_mainlobe_energy_unimodular(rng):
    s = random_waveform(rng, 3, 10)
    assert metrics.mainlobe_energy(s) == pytest.approx(3 * 100)


def test_range_islr_zero_energy():
    with pytest.raises(DegenerateError):
        metrics.range_islr(np.zeros((2, 4)))


def test_to_db():
    assert metrics.to_db(10.0) == pytest.approx(10.0)
    assert metrics.to_db(0.0) == -3000.0
    assert np.isnan(metrics.to_db(float("nan")))


def test_objective_combination(rng):
    sc = AngleScenario.default_scene(4, 16)
    s = random_waveform(rng, 4, 16)
    rep = metrics.objective(s, sc, 0.3)
    assert rep.objective == pytest.approx(0.3 * rep.spatial_islr + 0.7 * rep.range_islr)
    assert metrics.weighted_objective(s, sc, 0.3) == pytest.approx(rep.objective)
    assert metrics.weighted_objective(s, sc, 0.0) == rep.range_islr
    assert metrics.weighted_objective(s, sc, 1.0) == rep.spatial_islr
    with pytest.raises(ValueError):
        metrics.objective(s, sc, 1.2)


def test_quadratic_sum_rejects_non_hermitian(rng):
    s = random_waveform(rng, 2, 3)
    with pytest.raises(AssertionError):
        metrics.quadratic_sum(s, np.array([[0, 1], [0, 0]], dtype=complex))


@settings(max_examples=40, deadline=None)
@given(mt=st.integers(2, 5), n=st.integers(2, 24), seed=st.integers(0, 2 ** 32 - 1))
def test_unimodular_range_islr_lower_bound(mt, n, seed):
    s = random_waveform(np.random.default_rng(seed), mt, n)
    assert metrics.range_islr(s) >= (mt - 1) * (1 - 1e-12)


@settings(max_examples=40, deadline=None)
@given(mt=st.integers(1, 5), n=st.integers(2, 20), seed=st.integers(0, 2 ** 32 - 1),
       scale=st.floats(0.1, 10.0))
def test_islr_invariances(mt, n, seed, scale):
    rng = np.random.default_rng(seed)
    s = random_waveform(rng, mt, n, "general")
    sc = AngleScenario.default_scene(mt, n)
    base_r, base_s = metrics.range_islr(s), metrics.spatial_islr(s, sc)
    # per-row phase rotation leaves every |r_ml(k)| unchanged
    rot = s * np.exp(1j * rng.uniform(-np.pi, np.pi, size=(mt, 1)))
    assert metrics.range_islr(rot) == pytest.approx(base_r, rel=1e-9)
    # a common complex gain scales numerator and denominator alike
    g = scale * np.exp(1j * rng.uniform(-np.pi, np.pi))
    assert metrics.range_islr(g * s) == pytest.approx(base_r, rel=1e-9)
    assert metrics.spatial_islr(g * s, sc) == pytest.approx(base_s, rel=1e-9)
