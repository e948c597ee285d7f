import numpy as np
import pytest

from src.numerics.optim import Adam, AdamState, adam_step


def test_first_step_is_signed_learning_rate():
    p = {"w": np.array([1.0, -2.0, 0.5])}
    g = {"w": np.array([0.3, -4.0, 1e-3])}
    adam_step(p, g, AdamState(lr=0.01))
    np.testing.assert_allclose(p["w"], [1.0 - 0.01, -2.0 + 0.01, 0.5 - 0.01], atol=1e-6)


def test_zero_gradient_is_a_fixed_point():
    p = {"w": np.array([1.0, 2.0])}
    state = AdamState()
    for _ in range(5):
        adam_step(p, {"w": np.zeros(2)}, state)
    np.testing.assert_array_equal(p["w"], [1.0, 2.0])
    assert state.t == 5


def test_without_moments_adam_is_sign_descent():
    p = {"w": np.array([0.0, 0.0])}
    state = AdamState(lr=0.1, beta1=0.0, beta2=0.0, eps=1e-12)
    for _ in range(3):
        adam_step(p, {"w": np.array([2.0, -5.0])}, state)
    np.testing.assert_allclose(p["w"], [-0.3, 0.3], rtol=1e-10)


def test_non_finite_gradient_rejects_step():
    opt = Adam(lr=0.1)
    p = {"w": np.array([1.0]), "b": np.array([2.0])}
    ok = opt.step(p, {"w": np.array([np.nan]), "b": np.array([1.0])})
    assert not ok
    np.testing.assert_array_equal(p["w"], [1.0])
    np.testing.assert_array_equal(p["b"], [2.0])
    assert opt.state.t == 0


def test_state_shape_mismatch():
    state = AdamState()
    adam_step({"w": np.zeros(2)}, {"w": np.ones(2)}, state)
    with pytest.raises(ValueError):
        adam_step({"w": np.zeros(3)}, {"w": np.ones(3)}, state)


def test_updates_are_deterministic():
    runs = []
    for _ in range(2):
        p = {"w": np.array([0.2, -0.4])}
        opt = Adam(lr=0.05)
        for step in range(4):
            opt.step(p, {"w": np.array([np.sin(step), np.cos(step)])})
        runs.append(p["w"].copy())
    assert runs[0].tobytes() == runs[1].tobytes()
