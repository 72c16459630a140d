import numpy as np
import pytest

from mimo_islr.model import (AngleScenario, ConfigError, Constraint, ConstraintError, ConstraintSpec,
                             DimensionError, RunConfig, ScenarioError, WaveformSet, expand_region,
                             validate_config)


def test_waveform_set_is_read_only_copy():
    raw = np.ones((2, 4), dtype=complex)
    ws = WaveformSet(raw)
    raw[0, 0] = 5
    assert ws.entries[0, 0] == 1
    with pytest.raises(ValueError):
        ws.entries[0, 0] = 2
    assert (ws.mt, ws.n, ws.energy) == (2, 4, 8.0)
    assert np.asarray(ws).shape == (2, 4)


@pytest.mark.parametrize("bad", [np.ones(4), np.ones((2, 1)), np.full((2, 3), np.nan)])
def test_waveform_set_rejects_bad_input(bad):
    with pytest.raises(DimensionError):
        WaveformSet(bad)


def test_expand_region_includes_both_ends():
    np.testing.assert_allclose(expand_region(-55, -35, 5), [-55, -50, -45, -40, -35])
    np.testing.assert_allclose(expand_region(0, 7, 5), [0, 5, 7])
    np.testing.assert_allclose(expand_region(3, 3, 1), [3])
    with pytest.raises(ScenarioError):
        expand_region(0, 1, 0)


def test_default_scenario_grid_sizes():
    sc = AngleScenario.default_scene()
    assert len(sc.theta_d) == 5
    assert len(sc.theta_u) == 7 + 25
    assert sc.mt == 8 and sc.n == 64


def test_steering_matrices_are_hermitian_psd_with_known_trace():
    sc = AngleScenario.default_scene(6, 10)
    for a in (sc.a_d, sc.a_u):
        np.testing.assert_allclose(a, a.conj().T, atol=1e-15)
        assert np.linalg.eigvalsh(a).min() > -1e-12
        # each a a^H has trace mt; the average is divided by n
        assert np.trace(a).real == pytest.approx(6 / 10)


def test_overlapping_angles_rejected():
    with pytest.raises(ScenarioError, match="both desired and undesired"):
        AngleScenario.from_regions([(-10, 10, 5)], [(10, 30, 5)], 4, 8)


def test_duplicate_angles_are_merged():
    sc = AngleScenario.from_regions([(0, 10, 5), (5, 10, 5)], [(20, 30, 10)], 2, 4)
    assert len(sc.theta_d) == 3


def test_empty_angle_set_rejected():
    with pytest.raises(ScenarioError):
        AngleScenario((), (0.1,), 2, 4)


def test_par_db_conversion():
    assert ConstraintSpec.par_db(1.5).gamma_p == pytest.approx(10 ** 0.15)


def test_constraint_checks():
    with pytest.raises(ConstraintError, match="Mt·N"):
        ConstraintSpec.par(32).check(4, 8)
    with pytest.raises(ConstraintError):
        ConstraintSpec.par(0.5).check(4, 8)
    with pytest.raises(ConstraintError):
        ConstraintSpec.discrete(1).check(4, 8)
    ConstraintSpec.par(31.9).check(4, 8)
    assert ConstraintSpec.discrete(4).unimodular
    assert not ConstraintSpec.energy().unimodular


def test_feasibility():
    s = np.exp(2j * np.pi * np.arange(8).reshape(2, 4) / 4)
    for spec in (ConstraintSpec.energy(), ConstraintSpec.par(1.0), ConstraintSpec.continuous(),
                 ConstraintSpec.discrete(4), ConstraintSpec.discrete(8)):
        assert spec.is_feasible(s)
    assert not ConstraintSpec.discrete(2).is_feasible(s)
    spiky = s.copy()
    spiky[0, 0] = 2.0
    spiky *= np.sqrt(8 / np.vdot(spiky, spiky).real)
    assert ConstraintSpec.energy().is_feasible(spiky)
    assert not ConstraintSpec.par(1.5).is_feasible(spiky)
    assert not ConstraintSpec.energy().is_feasible(2 * s)


def _cfg(**kw):
    base = dict(mt=4, n=16, scenario=AngleScenario.default_scene(8, 64),
                constraint=ConstraintSpec.continuous(), eta=0.5)
    base.update(kw)
    return RunConfig(**base)


def test_validate_resizes_scenario():
    cfg = validate_config(_cfg())
    assert (cfg.scenario.mt, cfg.scenario.n) == (4, 16)
    assert cfg.scenario.a_d.shape == (4, 4)


@pytest.mark.parametrize("kw, exc", [
    (dict(eta=1.5), ConfigError), (dict(eta=-0.1), ConfigError), (dict(mt=0), DimensionError),
    (dict(n=1), DimensionError), (dict(zeta=0.0), ConfigError), (dict(max_sweeps=0), ConfigError),
    (dict(constraint=ConstraintSpec.par(64)), ConstraintError), (dict(seed=-1), ConfigError),
])
def test_validate_rejects(kw, exc):
    with pytest.raises(exc):
        validate_config(_cfg(**kw))


def test_eta_message():
    with pytest.raises(ConfigError, match=r"eta out of \[0,1\]"):
        validate_config(_cfg(eta=2))


def test_constraint_enum_values():
    assert {c.value for c in Constraint} == {"energy", "par", "continuous_phase", "discrete_phase"}
