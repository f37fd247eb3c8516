import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from psoqe.lyapunov import (QuadForm, delta_v_coeffs, eval_quad_form, expected_delta_v,
                            mc_expected_delta_v)
from psoqe.model import PMatrix, StateVec, SwarmParams, Variant, build_system

I = PMatrix.identity()


@pytest.mark.parametrize("params,expected", [
    (SwarmParams.sigma1(0.5, 0.0), (-5 / 12, 0.0, -1.0)),
    (SwarmParams.sigma1(0.0, 0.0), (0.0, 0.0, -1.0)),
    (SwarmParams.sigma2(0.5, 0.5, 0.0), (-1 / 3, 0.0, -1.0)),
])
def test_expected_delta_v_examples(params, expected):
    q = expected_delta_v(params, I)
    np.testing.assert_allclose(q.as_tuple(), expected, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("q,z,expected", [
    (QuadForm(-5 / 12, 0, -1), StateVec(1, 0), -5 / 12),
    (QuadForm(0, 0, -1), StateVec(3, 2), -4.0),
    (QuadForm(1, 2, 1), StateVec(1, 1), 4.0),
])
def test_eval_quad_form(q, z, expected):
    assert eval_quad_form(q, z) == pytest.approx(expected, rel=1e-15)


def _exact_form(params, P):
    """E{V(z+)} - V(z) from the system matrices and the drive moments."""
    sysm = build_system(params)
    Pm = P.as_array()
    m1, m2 = (params.gain, 7 / 6 * params.gain ** 2) if params.variant is Variant.SIGMA1 \
        else (params.gain / 2, params.gain ** 2 / 3)
    A, B = sysm.A, sysm.B / params.gain  # B here carries only the sign pattern
    M = A.T @ Pm @ A + m1 * (A.T @ Pm @ B + B.T @ Pm @ A) + m2 * (B.T @ Pm @ B) - Pm
    return M[0, 0], 2 * M[0, 1], M[1, 1]


variants = st.sampled_from(list(Variant))
gains = st.floats(0.01, 5)
ws = st.floats(-1.5, 1.5)
pvals = st.floats(-3, 3)


@given(variants, gains, ws, pvals, pvals, pvals)
def test_closed_form_matches_matrix_expectation(variant, gain, w, p1, p2, p3):
    params = SwarmParams.from_gain(variant, gain, w)
    got = expected_delta_v(params, PMatrix(p1, p2, p3)).as_tuple()
    np.testing.assert_allclose(got, _exact_form(params, PMatrix(p1, p2, p3)),
                               rtol=1e-9, atol=1e-9)


@given(variants, gains, ws, pvals, pvals, pvals, pvals, pvals, pvals, st.floats(-3, 3))
def test_linear_in_p(variant, gain, w, a1, a2, a3, b1, b2, b3, lam):
    d1 = np.array(delta_v_coeffs(variant, gain, w, a1, a2, a3))
    d2 = np.array(delta_v_coeffs(variant, gain, w, b1, b2, b3))
    mix = np.array(delta_v_coeffs(variant, gain, w, a1 + lam * b1, a2 + lam * b2,
                                  a3 + lam * b3))
    np.testing.assert_allclose(mix, d1 + lam * d2, rtol=1e-9, atol=1e-8)


@given(variants, gains, ws, pvals, pvals)
def test_w_parity_without_cross_term(variant, gain, w, p1, p3):
    d, e, a = delta_v_coeffs(variant, gain, w, p1, 0.0, p3)
    dm, em, am = delta_v_coeffs(variant, gain, -w, p1, 0.0, p3)
    assert (d, a, e) == (dm, am, -em)


def test_arrays_broadcast():
    d, e, a = delta_v_coeffs(Variant.SIGMA1, np.array([0.5, 1.0]), 0.0, 1, 0, 1)
    np.testing.assert_allclose(d, [-5 / 12, 1 / 3])


@pytest.mark.parametrize("params,expected", [
    (SwarmParams.sigma1(0.5, 0.0), -5 / 12),
    (SwarmParams.sigma2(0.5, 0.5, 0.0), -1 / 3),
])
def test_monte_carlo_examples(params, expected):
    mean, se = mc_expected_delta_v(params, I, StateVec(1, 0), trials=1_000_000, seed=3)
    assert abs(mean - expected) <= 4 * se


def test_monte_carlo_at_equilibrium():
    assert mc_expected_delta_v(SwarmParams.sigma1(1.3, 0.2), PMatrix(2, 0.5, 1),
                               StateVec(0, 0), trials=1000) == (0.0, 0.0)


def test_monte_carlo_is_seeded():
    args = (SwarmParams.sigma2(0.7, 0.4, -0.3), PMatrix(1, 0.2, 2), StateVec(0.5, -1))
    assert mc_expected_delta_v(*args, trials=5000, seed=9) == \
        mc_expected_delta_v(*args, trials=5000, seed=9)
    with pytest.raises(ValueError):
        mc_expected_delta_v(*args, trials=10)


@given(variants, st.floats(0.05, 4), st.floats(-1, 1), st.floats(0.1, 2), st.floats(-1, 1),
       st.floats(0.1, 2), st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 2**32))
def test_monte_carlo_agrees(variant, gain, w, p1, p2, p3, x, v, seed):
    params = SwarmParams.from_gain(variant, gain, w)
    P = PMatrix(p1, p2, p3)
    mean, se = mc_expected_delta_v(params, P, StateVec(x, v), trials=20_000, seed=seed)
    exact = expected_delta_v(params, P)(x, v)
    # 5 standard errors keeps the false-alarm rate per example below 1e-6
    assert abs(mean - exact) <= 5 * se + 1e-12
