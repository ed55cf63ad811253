"""L1 quadrature weights, scaling factor, and the memory term."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracrom.fractional import gamma_scale, history_rhs, l1_weights


def test_first_three_weights_at_beta_half():
    w = l1_weights(0.5, 3)
    expected = [1.0, math.sqrt(2.0) - 1.0, math.sqrt(3.0) - math.sqrt(2.0)]
    np.testing.assert_allclose(w.values, expected, rtol=0, atol=1e-15)


def test_single_weight_is_exactly_one():
    for beta in (0.1, 0.5, 0.9):
        w = l1_weights(beta, 1)
        assert len(w) == 1
        assert w.values[0] == 1.0


def test_leading_weight_is_one_for_any_order():
    for beta in (0.05, 0.25, 0.75, 0.95):
        assert l1_weights(beta, 20).values[0] == 1.0


def test_telescoping_sum_is_one():
    b = l1_weights(0.25, 64).values
    total = np.sum(b[:-1] - b[1:]) + b[-1]
    assert abs(total - 1.0) <= 1e-12


def test_weights_strictly_decreasing():
    b = l1_weights(0.75, 100).values
    assert np.all(np.diff(b) < 0)
    assert np.all(b > 0)


@settings(max_examples=60, derandomize=True, deadline=None)
@given(
    beta=st.floats(min_value=0.01, max_value=0.99),
    m=st.integers(min_value=1, max_value=5000),
)
def test_weight_invariants_hold_for_random_orders(beta, m):
    b = l1_weights(beta, m).values
    assert b[0] == 1.0
    assert np.all(b > 0)
    assert np.all(np.diff(b) < 0) or m == 1
    total = np.sum(b[:-1] - b[1:]) + b[-1]
    assert abs(total - 1.0) <= 1e-12


def test_weights_cache_is_read_only():
    w = l1_weights(0.5, 8)
    with pytest.raises(ValueError):
        w.values[0] = 2.0


def test_truncate_matches_fresh_weights():
    long = l1_weights(0.4, 32)
    short = long.truncate(7)
    np.testing.assert_array_equal(short.values, l1_weights(0.4, 7).values)
    with pytest.raises(ValueError):
        long.truncate(0)
    with pytest.raises(ValueError):
        long.truncate(33)


def test_order_outside_unit_interval_rejected():
    for bad in (0.0, 1.0, -0.3, 1.5):
        with pytest.raises(ValueError):
            l1_weights(bad, 4)
        with pytest.raises(ValueError):
            gamma_scale(bad, 0.1)


def test_gamma_scale_known_values():
    assert abs(gamma_scale(0.5, 1.0) - math.sqrt(math.pi) / 2.0) <= 1e-15
    assert abs(gamma_scale(0.5, 0.25) - 0.5 * math.gamma(1.5)) <= 1e-15
    for beta in (0.2, 0.7):
        assert gamma_scale(beta, 1.0) == math.gamma(2.0 - beta)


def test_gamma_scale_requires_positive_step():
    for dt in (0.0, -0.5):
        with pytest.raises(ValueError):
            gamma_scale(0.5, dt)


def test_history_single_level_returns_initial_state():
    u0 = np.array([1.0, -2.0, 0.5])
    out = history_rhs(u0[None, :], l1_weights(0.3, 1))
    np.testing.assert_array_equal(out, u0)


def test_history_of_constant_state_is_that_state():
    c = np.array([2.0, -1.0, 4.0, 0.25])
    hist = np.tile(c, (9, 1))
    out = history_rhs(hist, l1_weights(0.6, 9))
    np.testing.assert_allclose(out, c, rtol=0, atol=1e-14)


def test_history_three_levels_hand_expansion():
    rng = np.random.default_rng(3)
    hist = rng.standard_normal((3, 5))
    w = l1_weights(0.45, 3)
    b = w.values
    expected = (b[0] - b[1]) * hist[2] + (b[1] - b[2]) * hist[1] + b[2] * hist[0]
    np.testing.assert_allclose(history_rhs(hist, w), expected, rtol=0, atol=1e-15)


def test_history_scalar_path_returns_float():
    out = history_rhs(np.array([1.0, 2.0]), l1_weights(0.5, 2))
    assert isinstance(out, float)


@settings(max_examples=40, derandomize=True, deadline=None)
@given(
    beta=st.floats(min_value=0.05, max_value=0.95),
    m=st.integers(min_value=1, max_value=40),
    seed=st.integers(min_value=0, max_value=2**16),
)
def test_history_is_linear_in_the_states(beta, m, seed):
    rng = np.random.default_rng(seed)
    h1 = rng.standard_normal((m, 4))
    h2 = rng.standard_normal((m, 4))
    a, b = 1.7, -0.3
    w = l1_weights(beta, m)
    combined = history_rhs(a * h1 + b * h2, w)
    split = a * history_rhs(h1, w) + b * history_rhs(h2, w)
    scale = max(1.0, float(np.abs(split).max()))
    np.testing.assert_allclose(combined, split, rtol=0, atol=1e-13 * scale)


def test_history_rejects_mismatched_weight_count():
    with pytest.raises(ValueError):
        history_rhs(np.zeros((3, 2)), l1_weights(0.5, 4))
