"""Order identification: direction, line search, noise model, and the full loop."""
import numpy as np
import pytest

from fracrom.inverse import (
    IdentificationResult,
    LineSearchError,
    LmConfig,
    ObservationData,
    add_noise,
    armijo_search,
    identify,
    lm_direction,
    objective,
    sensitivity,
)


# --- search direction -------------------------------------------------------------


def test_direction_examples():
    j = np.array([1.0])
    assert lm_direction(j, np.array([1.0]), 0.0) == pytest.approx(-1.0)
    assert lm_direction(j, np.array([2.0]), 1.0) == pytest.approx(-1.0)
    assert lm_direction(j, np.array([-1.0]), 0.0) == pytest.approx(1.0)
    # regularization shrinks the step, never flips it
    assert lm_direction(j, np.array([1.0]), 3.0) == pytest.approx(-0.25)


def test_direction_requires_positive_denominator():
    with pytest.raises(ValueError):
        lm_direction(np.zeros(3), np.ones(3), 0.0)


# --- line search ------------------------------------------------------------------


def test_full_newton_step_on_quadratic():
    jac = np.array([1.0])
    residual = np.array([-0.2])
    d = lm_direction(jac, residual, 0.0)
    step, beta, m, f_new = armijo_search(
        0.4, d, jac, residual, lambda b: 0.5 * (b - 0.6) ** 2
    )
    assert m == 0
    assert step == pytest.approx(0.2)
    assert beta == pytest.approx(0.6)
    assert f_new == pytest.approx(0.0, abs=1e-16)


def test_zero_direction_short_circuits():
    step, beta, m, f_new = armijo_search(
        0.5, 0.0, np.array([1.0]), np.array([1.0]), lambda b: 99.0, f_k=1.23
    )
    assert (step, beta, m, f_new) == (0.0, 0.5, 0, 1.23)


def test_trials_outside_unit_interval_are_skipped():
    jac = np.array([1.0])
    residual = np.array([-0.2])
    step, beta, m, f_new = armijo_search(
        0.95, 0.2, jac, residual, lambda b: 0.5 * (b - 1.15) ** 2
    )
    assert m == 5  # first five trials land at or beyond the right endpoint
    assert step == pytest.approx(0.2 * 0.75**5)
    assert 0.95 < beta < 1.0
    assert f_new < 0.5 * 0.2**2


def test_non_descent_direction_warns_and_creeps():
    jac = np.array([1.0])
    residual = np.array([1.0])
    with pytest.warns(UserWarning):
        step, beta, m, _ = armijo_search(0.5, 0.5, jac, residual, lambda b: (b - 0.5) ** 2)
    assert m == 60
    assert step == pytest.approx(0.5 * 0.75**60)
    assert beta == pytest.approx(0.5 + step)


def test_exhausted_backtracking_raises():
    with pytest.raises(LineSearchError):
        armijo_search(0.5, -0.3, np.array([1.0]), np.array([1.0]), lambda b: 1e6)


# --- misfit and sensitivity -------------------------------------------------------


def test_objective_examples():
    forward = lambda b: np.array([b, b])
    assert objective(0.5, np.zeros(2), forward) == pytest.approx(0.25)
    assert objective(0.5, np.array([0.5, 0.5]), forward) == 0.0
    data = ObservationData(values=np.array([0.5, 0.7]))
    assert objective(0.5, data, forward) == pytest.approx(0.5 * 0.04)


def test_sensitivity_exact_for_linear_forward():
    rng = np.random.default_rng(6)
    v = rng.standard_normal(5)
    g = rng.standard_normal(5)
    jac, residual = sensitivity(0.4, g, lambda b: b * v)
    np.testing.assert_allclose(jac, v, rtol=1e-9)
    np.testing.assert_allclose(residual, 0.4 * v - g)


def test_sensitivity_flips_at_right_edge():
    seen = []

    def forward(b):
        seen.append(b)
        return np.array([b**2])

    jac, _ = sensitivity(0.9995, np.zeros(1), forward, 1e-3)
    np.testing.assert_allclose(sorted(seen), [0.9985, 0.9995])
    assert jac[0] == pytest.approx((0.9995**2 - 0.9985**2) / 1e-3)


def test_sensitivity_step_size_consistency(ex1_ident):
    forward = ex1_ident.rom_forward()
    data = ex1_ident.observed
    coarse, _ = sensitivity(0.5, data, forward, 1e-3)
    fine, _ = sensitivity(0.5, data, forward, 1e-4)
    mask = np.abs(fine) >= 1e-3 * np.max(np.abs(fine))
    rel = np.max(np.abs(coarse[mask] - fine[mask]) / np.abs(fine[mask]))
    assert rel <= 1e-2


# --- observation noise ------------------------------------------------------------


def test_zero_noise_is_exact_copy():
    values = np.array([1.0, -2.0, 3.5])
    obs = add_noise(values, 0.0, seed=42)
    np.testing.assert_array_equal(obs.values, values)
    obs.values[0] = 99.0
    assert values[0] == 1.0  # the observation owns its storage


def test_noise_is_seed_deterministic():
    values = np.linspace(0.1, 1.0, 50)
    a = add_noise(values, 1.0, seed=3)
    b = add_noise(values, 1.0, seed=3)
    c = add_noise(values, 1.0, seed=4)
    np.testing.assert_array_equal(a.values, b.values)
    assert np.any(a.values != c.values)
    assert a.noise_percent == 1.0
    assert a.seed == 3


def test_noise_magnitude_matches_level():
    values = np.ones(3969)
    obs = add_noise(values, 1.0, seed=123)
    std = np.std(obs.values - values)
    assert 0.009 <= std <= 0.011


def test_negative_noise_rejected():
    with pytest.raises(ValueError):
        add_noise(np.ones(3), -0.5)


# --- identification loop ----------------------------------------------------------


def test_identify_scalar_synthetic():
    calls = []

    def forward(b):
        calls.append(b)
        return np.array([b])

    config = LmConfig(beta0=0.3)
    result = identify(config, np.array([0.6]), forward)
    assert result.converged
    assert abs(result.beta_inv - 0.6) <= 1e-7
    assert len(result.trace) == result.iterations + 1
    assert [rec.k for rec in result.trace] == list(range(result.iterations + 1))
    assert result.forward_solves == len(calls)
    assert result.final_objective <= 1e-14
    objectives = [rec.objective for rec in result.trace]
    assert all(b <= a + 1e-15 for a, b in zip(objectives, objectives[1:]))


def test_identify_objective_zero_at_own_output(ex1_ident):
    forward = ex1_ident.rom_forward()
    fixed = forward(0.6)
    assert objective(0.6, fixed, forward) == 0.0


def test_iterates_stay_inside_unit_interval():
    # the misfit minimum sits outside the admissible orders; trial points past
    # the endpoint are skipped, so the loop stalls just inside instead
    forward = lambda b: np.array([b])
    config = LmConfig(beta0=0.5, max_iterations=10)
    result = identify(config, np.array([1.5]), forward)
    assert all(0.0 < rec.beta < 1.0 for rec in result.trace)
    assert 0.0 < result.beta_inv < 1.0
    assert result.beta_inv > 0.99


def test_iteration_cap_shape():
    forward = lambda b: np.array([b])
    config = LmConfig(beta0=0.5, max_iterations=2)
    result = identify(config, np.array([1.5]), forward)
    assert not result.converged
    assert result.iterations == 2
    assert len(result.trace) == 3


def test_identify_recovers_order_through_surrogate(ex1_ident):
    forward = ex1_ident.rom_forward()
    result = identify(LmConfig(), ex1_ident.observed, forward)
    assert result.converged
    assert abs(result.beta_inv - 0.75) <= 1e-7
    assert result.iterations <= 14
    assert result.final_objective <= 1e-14
    assert max(rec.backtracks for rec in result.trace) <= 5
    objectives = [rec.objective for rec in result.trace]
    assert all(b <= a + 1e-15 * max(1.0, a) for a, b in zip(objectives, objectives[1:]))
    assert isinstance(result, IdentificationResult)
    assert result.wall_time > 0.0


def test_config_validation():
    for kwargs in (
        {"beta0": 0.0},
        {"beta0": 1.0},
        {"rho": 0.0},
        {"rho": 1.0},
        {"sigma": 0.5},
        {"delta": 0.0},
        {"tol": 0.0},
    ):
        with pytest.raises(ValueError):
            LmConfig(**kwargs)
