"""Shrinkage rule, its derivative, and SURE-driven threshold selection."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from gsdenoise.frame import FrameCoefficients
from gsdenoise.threshold import (
    ThresholdPolicy,
    apply_policy,
    candidate_grid,
    js_derivative,
    js_threshold,
    select_thresholds_sure,
)


def test_hand_values():
    assert js_threshold(3.0, 1.0, 2.0) == pytest.approx(8.0 / 3.0)
    assert js_derivative(3.0, 1.0, 2.0) == pytest.approx(10.0 / 9.0)


def test_beta_one_is_soft_thresholding():
    x = np.random.default_rng(0).standard_normal(200) * 3
    t = 0.8
    soft = np.sign(x) * np.maximum(np.abs(x) - t, 0.0)
    assert np.allclose(js_threshold(x, t, 1.0), soft, atol=1e-12)


def test_derivative_conventions_at_special_points():
    # dead zone keeps zero, the kink takes the right-limit slope beta,
    # an exact zero input stays flat regardless
    assert js_derivative(0.3, 1.0, 3.0) == 0.0
    assert js_derivative(1.0, 1.0, 3.0) == 3.0
    assert js_derivative(-1.0, 1.0, 3.0) == 3.0
    assert js_derivative(0.0, 1.0, 3.0) == 0.0
    assert js_derivative(0.0, 0.0, 3.0) == 0.0
    assert js_derivative(2.0, 0.0, 3.0) == 1.0


def test_derivative_matches_finite_differences_away_from_kinks():
    rng = np.random.default_rng(5)
    t, beta = 0.9, 2.5
    x = rng.uniform(-4, 4, 500)
    x = x[np.abs(np.abs(x) - t) > 1e-3]  # stay away from the kinks
    x = x[np.abs(x) > 1e-3]
    h = 1e-6
    fd = (js_threshold(x + h, t, beta) - js_threshold(x - h, t, beta)) / (2 * h)
    assert np.max(np.abs(fd - js_derivative(x, t, beta))) <= 1e-5


def test_large_beta_does_not_overflow():
    x = np.array([1e-12, 0.5, 2.0])
    out = js_threshold(x, 1.0, 100.0)
    assert np.all(np.isfinite(out))
    assert out[0] == 0.0 and out[1] == 0.0
    assert np.isfinite(js_derivative(x, 1.0, 100.0)).all()


def test_beta_range_enforced():
    with pytest.raises(ValueError):
        js_threshold(1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        js_threshold(1.0, 1.0, 101.0)
    with pytest.raises(ValueError):
        js_threshold(1.0, -0.1, 2.0)


@settings(max_examples=80, deadline=None)
@given(hnp.arrays(np.float64, st.integers(1, 30),
                  elements=st.floats(-1e6, 1e6)),
       st.floats(0.0, 1e6), st.floats(1.0, 100.0))
def test_shrinkage_and_sign_preservation(x, t, beta):
    out = js_threshold(x, t, beta)
    assert np.all(np.abs(out) <= np.abs(x) + 1e-12)
    assert np.all((np.sign(out) == np.sign(x)) | (out == 0.0))


def test_threshold_monotone_in_t():
    x = np.random.default_rng(2).standard_normal(50)
    small = np.abs(js_threshold(x, 0.3, 2.0))
    large = np.abs(js_threshold(x, 0.9, 2.0))
    assert np.all(large <= small + 1e-15)


def test_candidate_grid_contents():
    grid = candidate_grid(np.array([2.0, -2.0]), P=4)
    assert grid[0] == 0.0 and grid[-1] == np.inf
    assert 2.0 in grid
    single = candidate_grid(np.array([0.5, -3.0]), P=1)
    assert np.array_equal(single, [0.0, 0.5, 3.0, np.inf])
    assert np.all(np.diff(candidate_grid(
        np.random.default_rng(0).standard_normal(40))) > 0)


def test_selection_matches_bruteforce_over_all_magnitudes():
    rng = np.random.default_rng(7)
    n, J = 15, 3
    coeffs = FrameCoefficients(rng.standard_normal(n * (J + 1)) * 2, n, J)
    wdiag = rng.uniform(0.2, 1.5, n * (J + 1))
    sigma, beta = 0.8, 2.0
    policy = select_thresholds_sure(coeffs, wdiag, sigma, beta=beta)

    def objective(x, w, t):
        h = js_threshold(x, t, beta)
        d = js_derivative(x, t, beta)
        r = h - x
        return r @ r + 2 * sigma ** 2 * (w @ d)

    for j in range(J + 1):
        x = coeffs.block(j)
        w = wdiag[j * n:(j + 1) * n]
        cands = np.concatenate([[0.0], np.abs(x), [np.inf]])
        best = min(cands, key=lambda t: objective(x, w, t))
        assert objective(x, w, policy.thresholds[j]) == pytest.approx(
            objective(x, w, best), rel=1e-12)


def test_selected_threshold_beats_sentinels():
    rng = np.random.default_rng(9)
    n, J = 40, 2
    coeffs = FrameCoefficients(rng.standard_normal(n * (J + 1)), n, J)
    wdiag = np.ones(n * (J + 1))
    sigma = 0.5
    policy = select_thresholds_sure(coeffs, wdiag, sigma)

    def objective(x, w, t):
        h = js_threshold(x, t, policy.beta)
        d = js_derivative(x, t, policy.beta)
        r = h - x
        return r @ r + 2 * sigma ** 2 * (w @ d)

    for j in range(J + 1):
        x, w = coeffs.block(j), wdiag[j * n:(j + 1) * n]
        chosen = objective(x, w, policy.thresholds[j])
        assert chosen <= objective(x, w, 0.0) + 1e-12
        assert chosen <= objective(x, w, np.inf) + 1e-12


def test_all_zero_scale_selects_zero_threshold():
    coeffs = FrameCoefficients(np.zeros(12), 4, 2)
    policy = select_thresholds_sure(coeffs, np.ones(12), 1.0)
    assert np.array_equal(policy.thresholds, np.zeros(3))


def test_apply_policy_returns_coefficients_and_derivatives():
    rng = np.random.default_rng(3)
    coeffs = FrameCoefficients(rng.standard_normal(20), 5, 3)
    policy = ThresholdPolicy(2.0, np.array([0.0, 0.5, 1.0, np.inf]))
    out, derivs = apply_policy(coeffs, policy)
    assert np.array_equal(out.block(0), coeffs.block(0))  # t=0 passes through
    assert np.array_equal(out.block(3), np.zeros(5))      # t=inf kills all
    assert np.array_equal(derivs[:5], np.ones(5))
    assert np.array_equal(derivs[15:], np.zeros(5))
    assert out.values.shape == coeffs.values.shape


def test_apply_policy_checks_scale_count():
    coeffs = FrameCoefficients(np.zeros(10), 5, 1)
    with pytest.raises(ValueError, match="scales"):
        apply_policy(coeffs, ThresholdPolicy(2.0, np.zeros(3)))
