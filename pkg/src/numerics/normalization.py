from typing import Dict, Literal, Optional, Tuple

import numpy as np

from src.errors import ContractViolation
from src.numerics.layers import Module

Mode = Literal["training", "inference"]


def _normalize(x: np.ndarray, axis: int, eps: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    mean = x.mean(axis=axis, keepdims=True)
    var = x.var(axis=axis, keepdims=True)
    inv_std = 1.0 / np.sqrt(var + eps)
    return (x - mean) * inv_std, inv_std, mean, var


def _normalize_backward(dxhat: np.ndarray, xhat: np.ndarray, inv_std: np.ndarray, axis: int) -> np.ndarray:
    n = xhat.shape[axis]
    return (inv_std / n) * (
        n * dxhat
        - dxhat.sum(axis=axis, keepdims=True)
        - xhat * (dxhat * xhat).sum(axis=axis, keepdims=True)
    )


class LayerNorm(Module):
    """Per-row normalization with population variance, then gain and bias"""

    def __init__(self, features: int, eps: float = 1e-5):
        self.gain = np.ones(features)
        self.bias = np.zeros(features)
        self.grad_gain = np.zeros(features)
        self.grad_bias = np.zeros(features)
        self.eps = eps
        self._cache: Optional[Tuple[np.ndarray, np.ndarray]] = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        xhat, inv_std, _, _ = _normalize(x, axis=1, eps=self.eps)
        self._cache = (xhat, inv_std)
        return xhat * self.gain + self.bias

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        xhat, inv_std = self._cache
        self.grad_gain += (upstream * xhat).sum(axis=0)
        self.grad_bias += upstream.sum(axis=0)
        return _normalize_backward(upstream * self.gain, xhat, inv_std, axis=1)

    def parameters(self) -> Dict[str, np.ndarray]:
        return {"gain": self.gain, "bias": self.bias}

    def gradients(self) -> Dict[str, np.ndarray]:
        return {"gain": self.grad_gain, "bias": self.grad_bias}


class BatchNorm(Module):
    """Per-feature normalization over the batch.

    Training mode uses batch statistics and folds them into the running ones
    (running <- momentum * running + (1 - momentum) * batch, population
    variance). Inference mode only reads the running statistics.
    """

    def __init__(self, features: int, momentum: float = 0.9, eps: float = 1e-5):
        self.gain = np.ones(features)
        self.bias = np.zeros(features)
        self.grad_gain = np.zeros(features)
        self.grad_bias = np.zeros(features)
        self.running_mean = np.zeros(features)
        self.running_var = np.ones(features)
        # stored as an array so it travels with the checkpoint
        self.batches_tracked = np.zeros(1)
        self.momentum = momentum
        self.eps = eps
        self._cache = None

    @property
    def populated(self) -> bool:
        return bool(self.batches_tracked[0] > 0)

    def forward(self, x: np.ndarray, mode: Mode = "training") -> np.ndarray:
        if mode == "training":
            if x.shape[0] < 2:
                raise ContractViolation("Batch normalization in training mode needs a batch of at least 2 rows")
            xhat, inv_std, mean, var = _normalize(x, axis=0, eps=self.eps)
            self.running_mean[...] = self.momentum * self.running_mean + (1.0 - self.momentum) * mean.ravel()
            self.running_var[...] = self.momentum * self.running_var + (1.0 - self.momentum) * var.ravel()
            self.batches_tracked += 1
            self._cache = ("training", xhat, inv_std)
        elif mode == "inference":
            inv_std = 1.0 / np.sqrt(self.running_var + self.eps)
            xhat = (x - self.running_mean) * inv_std
            self._cache = ("inference", xhat, inv_std)
        else:
            raise ContractViolation(f"Unknown batch-norm mode '{mode}'")
        return xhat * self.gain + self.bias

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        mode, xhat, inv_std = self._cache
        self.grad_gain += (upstream * xhat).sum(axis=0)
        self.grad_bias += upstream.sum(axis=0)
        dxhat = upstream * self.gain
        if mode == "inference":
            return dxhat * inv_std
        return _normalize_backward(dxhat, xhat, inv_std, axis=0)

    def parameters(self) -> Dict[str, np.ndarray]:
        return {"gain": self.gain, "bias": self.bias}

    def gradients(self) -> Dict[str, np.ndarray]:
        return {"gain": self.grad_gain, "bias": self.grad_bias}

    def buffers(self) -> Dict[str, np.ndarray]:
        return {"running_mean": self.running_mean, "running_var": self.running_var, "batches_tracked": self.batches_tracked}


def layer_norm(x: np.ndarray, params: LayerNorm) -> np.ndarray:
    return params.forward(x)


def batch_norm(x: np.ndarray, params: BatchNorm, mode: Mode = "training") -> np.ndarray:
    return params.forward(x, mode)
