"""Elementwise and row-wise activations with their backward passes.

Backward functions take the upstream gradient first and whatever the forward
pass needs to rebuild the local Jacobian (input for LeakyReLU, output for
softmax and sigmoid).
"""
import numpy as np
from scipy.special import expit

SIGMOID_CLAMP = 1e-7


def leaky_relu(x: np.ndarray, slope: float = 0.1) -> np.ndarray:
    return np.where(x > 0, x, slope * x)


def leaky_relu_grad(x: np.ndarray, slope: float = 0.1) -> np.ndarray:
    # subgradient at 0 is the negative-side slope
    return np.where(x > 0, 1.0, slope)


def leaky_relu_backward(upstream: np.ndarray, x: np.ndarray, slope: float = 0.1) -> np.ndarray:
    return upstream * leaky_relu_grad(x, slope)


def softmax(x: np.ndarray) -> np.ndarray:
    """Row softmax with max subtraction"""
    x = np.atleast_2d(x)
    if x.shape[1] == 0:
        return x.astype(np.float64, copy=True)
    shifted = x - x.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_backward(upstream: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Jacobian-vector product of the row softmax, given its output y"""
    return y * (upstream - (upstream * y).sum(axis=1, keepdims=True))


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function, clamped to [1e-7, 1 - 1e-7] so downstream logs stay finite"""
    return np.clip(expit(x), SIGMOID_CLAMP, 1.0 - SIGMOID_CLAMP)


def sigmoid_backward(upstream: np.ndarray, y: np.ndarray) -> np.ndarray:
    return upstream * y * (1.0 - y)
