from typing import Dict, Optional, Tuple

import numpy as np

from src.errors import ContractViolation
from src.numerics.spectral import (
    SPECTRAL_MAX_ITERATIONS,
    SPECTRAL_TOL,
    SpectralState,
    normalized_weight,
    power_iteration,
    spectral_weight_grad,
)


def glorot_uniform(rng: np.random.Generator, out_features: int, in_features: int) -> np.ndarray:
    limit = np.sqrt(6.0 / max(in_features + out_features, 1))
    return rng.uniform(-limit, limit, size=(out_features, in_features))


class Module:
    """Minimal parameter container shared by layers and networks"""

    def parameters(self) -> Dict[str, np.ndarray]:
        return {}

    def gradients(self) -> Dict[str, np.ndarray]:
        return {}

    def buffers(self) -> Dict[str, np.ndarray]:
        """Non-trainable state that must be checkpointed (running stats, power-iteration vectors)"""
        return {}

    def zero_grad(self) -> None:
        for g in self.gradients().values():
            g.fill(0.0)

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {**self.parameters(), **self.buffers()}

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        own = self.state_dict()
        missing = sorted(set(own) - set(state))
        if missing:
            raise ContractViolation(f"Checkpoint is missing tensors: {missing}")
        for name, target in own.items():
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != target.shape:
                raise ContractViolation(f"Tensor {name} has shape {value.shape}, expected {target.shape}")
            target[...] = value

    def num_parameters(self) -> int:
        return sum(p.size for p in self.parameters().values())


def prefixed(prefix: str, tensors: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    return {f"{prefix}.{k}": v for k, v in tensors.items()}


class DenseLayer(Module):
    """Affine map y = x W^T + b, optionally spectrally normalized.

    With spectral normalization on, every forward pass uses W / sigma_hat with
    sigma_hat = u^T W v from the persistent power-iteration state; raw W is
    never applied directly.
    """

    def __init__(
        self,
        in_features: int,
        out_features: int,
        rng: np.random.Generator,
        spectral_norm: bool = False,
        n_power_iterations: int = 1,
    ):
        self.in_features = in_features
        self.out_features = out_features
        self.W = glorot_uniform(rng, out_features, in_features)
        self.b = np.zeros(out_features)
        self.gradW = np.zeros_like(self.W)
        self.gradb = np.zeros_like(self.b)
        self.spectral: Optional[SpectralState] = (
            SpectralState.create(out_features, in_features, rng, n_power_iterations) if spectral_norm else None
        )
        if self.spectral is not None:
            # start from a converged estimate; training then refines it with n_power_iterations per step
            power_iteration(self.W, self.spectral, SPECTRAL_MAX_ITERATIONS, tol=SPECTRAL_TOL)
        self._x: Optional[np.ndarray] = None

    def weight(self) -> np.ndarray:
        """The matrix actually applied in the forward pass"""
        if self.spectral is None:
            return self.W
        return normalized_weight(self.W, self.spectral)[0]

    def refresh_spectral(self, n_iterations: Optional[int] = None) -> float:
        """Advance the power iteration; returns the new sigma estimate"""
        if self.spectral is None:
            return 1.0
        power_iteration(self.W, self.spectral, n_iterations or self.spectral.n_power_iterations)
        return self.spectral.sigma

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        if x.shape[1] != self.in_features:
            raise ContractViolation(f"Dense layer expects {self.in_features} input features, got {x.shape[1]}")
        self._x = x
        return x @ self.weight().T + self.b

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        """Accumulate gradW, gradb from the last forward input; return dL/dx"""
        if self._x is None:
            raise ContractViolation("backward called before forward")
        if upstream.shape != (self._x.shape[0], self.out_features):
            raise ContractViolation(f"Upstream gradient shape {upstream.shape} does not match layer output")
        self.accumulate_weight_grad(upstream.T @ self._x)
        self.gradb += upstream.sum(axis=0)
        return upstream @ self.weight()

    def accumulate_weight_grad(self, grad_applied: np.ndarray) -> None:
        """Add a gradient taken w.r.t. the applied weight, mapped back to raw W"""
        if self.spectral is None:
            self.gradW += grad_applied
        else:
            self.gradW += spectral_weight_grad(grad_applied, self.W, self.spectral)

    def parameters(self) -> Dict[str, np.ndarray]:
        return {"W": self.W, "b": self.b}

    def gradients(self) -> Dict[str, np.ndarray]:
        return {"W": self.gradW, "b": self.gradb}

    def buffers(self) -> Dict[str, np.ndarray]:
        if self.spectral is None:
            return {}
        return {"sn_u": self.spectral.u, "sn_v": self.spectral.v}

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        super().load_state_dict(state)
        if self.spectral is not None:
            self.spectral.sigma = normalized_weight(self.W, self.spectral)[1]


def spectral_normalize(layer: DenseLayer, n_power_iterations: int = 1) -> Tuple[np.ndarray, float]:
    """Run the power iteration on a layer and return (W / sigma_hat, sigma_hat)"""
    sigma = layer.refresh_spectral(n_power_iterations)
    return layer.weight(), sigma
