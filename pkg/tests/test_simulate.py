import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psoqe.lyapunov import expected_delta_v
from psoqe.model import PMatrix, StateVec, SwarmParams, Variant
from psoqe.simulate import (Dynamics, SimConfig, Verdict, classify, decay_fraction,
                            initial_states, moment_radius, run_ensemble, step_once,
                            trajectories, trial_uniforms, witness_decay_check)


@pytest.mark.parametrize("dynamics", list(Dynamics))
def test_zero_gain_freezes_after_one_step(dynamics):
    p = SwarmParams.sigma1(0.0, 0.0)
    z = step_once(p, StateVec(0.7, -0.3), (0.2, 0.9), dynamics)
    assert z == StateVec(0.7, 0.0)
    assert step_once(p, z, (0.5, 0.5), dynamics) == z


def test_pure_drift_row():
    p = SwarmParams.sigma1(2.5, 1.0)
    assert step_once(p, StateVec(1.5, 0.25), (0.0, 0.0)) == StateVec(1.75, 0.25)


def test_step_once_checks_draw_count():
    with pytest.raises(ValueError):
        step_once(SwarmParams.sigma2(1, 1, 0.1), StateVec(1, 1), (0.1, 0.2))


@given(st.floats(0.0, 4), st.floats(-1, 1), st.floats(-2, 2), st.floats(-2, 2),
       st.floats(0, 1), st.floats(0, 1))
def test_dynamics_forms_agree(c, w, x, v, r1, r2):
    p = SwarmParams.sigma1(c, w)
    a = step_once(p, StateVec(x, v), (r1, r2), Dynamics.SYSTEM_FORM)
    b = step_once(p, StateVec(x, v), (r1, r2), Dynamics.ORIGINAL_UPDATE)
    assert a.x == pytest.approx(b.x, rel=1e-12, abs=1e-12)
    assert a.v == pytest.approx(b.v, rel=1e-12, abs=1e-12)


def test_convergent_example():
    cfg = SimConfig(SwarmParams.sigma1(0.5, 0.2), trials=10_000, steps=500, seed=7)
    stats = run_ensemble(cfg)
    assert stats.decay_ratio < 0.1
    assert classify(stats) is Verdict.CONVERGENT


def test_divergent_example():
    cfg = SimConfig(SwarmParams.sigma1(4.0, 0.95), trials=1000, steps=200, seed=7)
    stats = run_ensemble(cfg)
    assert stats.decay_ratio > 10 or stats.finite_fraction < 1
    assert classify(stats) is Verdict.DIVERGENT


def test_frozen_dynamics_inconclusive():
    cfg = SimConfig(SwarmParams.sigma1(0.0, 0.0), trials=2000, steps=50, seed=1)
    stats = run_ensemble(cfg)
    z0 = initial_states(cfg)
    share = np.mean(z0[:, 0] ** 2) / np.mean((z0 ** 2).sum(1))
    assert np.allclose(stats.mean_sq[1:] / stats.mean_sq[0], share)
    assert classify(stats) is Verdict.INCONCLUSIVE


def test_divergence_guard_freezes_trajectories():
    cfg = SimConfig(SwarmParams.sigma1(4.0, 0.99), trials=200, steps=2000, seed=2)
    stats = run_ensemble(cfg)
    assert stats.finite_fraction < 1
    assert np.all(np.isfinite(stats.mean_sq))


def test_streams_depend_only_on_seed_and_trial():
    cfg = SimConfig(SwarmParams.sigma2(0.6, 0.6, 0.3), trials=8, steps=20, seed=5)
    big = SimConfig(cfg.params, trials=16, steps=20, seed=5)
    np.testing.assert_array_equal(trajectories(cfg, np.ones((8, 2)))[:, :8],
                                  trajectories(big, np.ones((16, 2)))[:, :8])
    np.testing.assert_array_equal(trial_uniforms(5, 3, 20, 1), trial_uniforms(5, 3, 20, 1))
    assert not np.array_equal(trial_uniforms(5, 3, 20, 1), trial_uniforms(6, 3, 20, 1))


@given(st.integers(0, 2**63), st.sampled_from(list(Variant)))
def test_seed_determinism(seed, variant):
    cfg = SimConfig(SwarmParams.from_gain(variant, 1.1, 0.4), trials=32, steps=30, seed=seed)
    a, b = run_ensemble(cfg, PMatrix.identity()), run_ensemble(cfg, PMatrix.identity())
    np.testing.assert_array_equal(a.mean_sq, b.mean_sq)
    np.testing.assert_array_equal(a.mean_v, b.mean_v)


def test_witness_decay_member_point():
    cfg = SimConfig(SwarmParams.sigma1(0.5, 0.0), trials=10_000, steps=200, seed=11)
    assert witness_decay_check(cfg, PMatrix.identity())


def test_witness_decay_non_member_point():
    # identity does not certify c = 1, w = 0.5: E{dV} grows along the x axis
    params = SwarmParams.sigma1(1.0, 0.5)
    assert expected_delta_v(params, PMatrix.identity()).d > 0
    z0 = np.tile([1.0, 0.0], (10_000, 1))
    cfg = SimConfig(params, trials=10_000, steps=200, seed=12)
    stats = run_ensemble(cfg, PMatrix.identity(), z0)
    assert stats.mean_v[1] > stats.mean_v[0]
    assert decay_fraction(stats) < 1.0
    # the point is still mean-square stable, so later steps decay
    assert moment_radius(params, 2) < 1


def test_witness_decay_vacuous_for_zero_start():
    cfg = SimConfig(SwarmParams.sigma1(1.2, 0.3), trials=100, steps=50, seed=0)
    assert witness_decay_check(cfg, PMatrix.identity(), z0=np.zeros((100, 2)))


def test_witness_must_be_positive_definite():
    cfg = SimConfig(SwarmParams.sigma1(0.5, 0.0), trials=10, steps=5)
    with pytest.raises(ValueError):
        witness_decay_check(cfg, PMatrix(1, 2, 1))


def test_second_moment_radius_matches_ensemble():
    params = SwarmParams.sigma1(0.5, 0.2)
    rho = moment_radius(params, 2)
    stats = run_ensemble(SimConfig(params, trials=20_000, steps=40, seed=3))
    rate = (stats.mean_sq[40] / stats.mean_sq[20]) ** (1 / 20)
    assert rate == pytest.approx(rho, rel=0.05)


@pytest.mark.parametrize("kwargs", [dict(trials=0), dict(steps=0), dict(init_box=0),
                                    dict(seed=-1)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimConfig(SwarmParams.sigma1(0.5, 0.2), **kwargs)
