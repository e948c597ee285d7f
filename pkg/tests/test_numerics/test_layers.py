import numpy as np
import pytest

from src.errors import ContractViolation
from src.numerics.gradcheck import gradient_check, parameter_gradient_check
from src.numerics.layers import DenseLayer

SEEDS = range(20)


def test_scalar_forward(rng):
    layer = DenseLayer(1, 1, rng)
    layer.W[...] = 3.0
    np.testing.assert_allclose(layer.forward(np.array([[2.0]])), [[6.0]])


def test_identity_weights(rng):
    layer = DenseLayer(3, 3, rng)
    layer.W[...] = np.eye(3)
    x = rng.normal(size=(4, 3))
    np.testing.assert_allclose(layer.forward(x), x)


def test_input_width_mismatch(rng):
    layer = DenseLayer(3, 2, rng)
    with pytest.raises(ContractViolation):
        layer.forward(np.zeros((1, 4)))


def test_backward_before_forward(rng):
    with pytest.raises(ContractViolation):
        DenseLayer(3, 2, rng).backward(np.zeros((1, 2)))


@pytest.mark.parametrize("spectral", [False, True])
@pytest.mark.parametrize("seed", SEEDS)
def test_gradients_match_finite_differences(seed, spectral):
    rng = np.random.default_rng(seed)
    layer = DenseLayer(3, 4, rng, spectral_norm=spectral)
    x = rng.normal(size=(5, 3))
    w = rng.normal(size=(5, 4))

    def loss():
        return float((w * layer.forward(x)).sum())

    layer.forward(x)
    dx = layer.backward(w)
    assert parameter_gradient_check(loss, layer.W, layer.gradW, tolerance=1e-5).passed
    assert parameter_gradient_check(loss, layer.b, layer.gradb, tolerance=1e-5).passed
    report = gradient_check(lambda z: float((w * layer.forward(z)).sum()), x, dx, tolerance=1e-5)
    assert report.passed, report


def test_gradients_accumulate_until_zeroed(rng):
    layer = DenseLayer(2, 2, rng)
    x = rng.normal(size=(3, 2))
    layer.forward(x)
    layer.backward(np.ones((3, 2)))
    first = layer.gradW.copy()
    layer.forward(x)
    layer.backward(np.ones((3, 2)))
    np.testing.assert_allclose(layer.gradW, 2 * first)
    layer.zero_grad()
    assert not layer.gradW.any()


def test_state_dict_shape_mismatch(rng):
    layer = DenseLayer(3, 2, rng)
    state = layer.state_dict()
    state["W"] = np.zeros((3, 3))
    with pytest.raises(ContractViolation):
        layer.load_state_dict(state)
