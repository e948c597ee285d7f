from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np

from src.errors import ContractViolation
from src.numerics.activations import leaky_relu, leaky_relu_backward, leaky_relu_grad, sigmoid, sigmoid_backward
from src.numerics.layers import DenseLayer, Module, prefixed
from src.numerics.spectral import estimate_sigma

GradientTarget = Literal["probability", "logit"]


@dataclass
class _ForwardCache:
    h1: np.ndarray
    h2: np.ndarray
    logits: np.ndarray
    d_out: np.ndarray


class DiscriminatorParams(Module):
    """Fully connected critic: input layer, discriminative feature layer, sigmoid output.

    Every linear layer is spectrally normalized when `spectral_norm` is on.
    The feature layer's activations are the discriminative features used for
    visualization.
    """

    def __init__(
        self,
        input_size: int,
        hidden_size: int,
        rng: np.random.Generator,
        spectral_norm: bool = True,
        n_power_iterations: int = 1,
        leaky_slope: float = 0.1,
    ):
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.slope = leaky_slope
        self.input_layer = DenseLayer(input_size, hidden_size, rng, spectral_norm, n_power_iterations)
        self.feature_layer = DenseLayer(hidden_size, hidden_size, rng, spectral_norm, n_power_iterations)
        self.output_layer = DenseLayer(hidden_size, 1, rng, spectral_norm, n_power_iterations)
        self._cache: Optional[_ForwardCache] = None

    @property
    def layers(self) -> Tuple[DenseLayer, DenseLayer, DenseLayer]:
        return (self.input_layer, self.feature_layer, self.output_layer)

    def refresh_spectral(self, n_iterations: Optional[int] = None) -> None:
        for layer in self.layers:
            layer.refresh_spectral(n_iterations)

    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Returns (features m x H_d, D_out m) and caches activations for the backward passes"""
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != self.input_size:
            raise ContractViolation(f"Discriminator expects {self.input_size}-dimensional documents, got {x.shape[1]}")
        h1 = self.input_layer.forward(x)
        h2 = self.feature_layer.forward(leaky_relu(h1, self.slope))
        features = leaky_relu(h2, self.slope)
        logits = self.output_layer.forward(features)[:, 0]
        d_out = sigmoid(logits)
        self._cache = _ForwardCache(h1, h2, logits, d_out)
        return features, d_out

    def logits(self, x: np.ndarray) -> np.ndarray:
        self.forward(x)
        return self._cache.logits

    def backward(self, grad_d_out: Optional[np.ndarray] = None, grad_logits: Optional[np.ndarray] = None) -> np.ndarray:
        """Backpropagate from D_out (or from the logits) through the last forward; returns dL/dx"""
        c = self._require_cache()
        if grad_logits is None:
            grad_logits = sigmoid_backward(grad_d_out, c.d_out)
        da2 = self.output_layer.backward(grad_logits[:, None])
        da1 = self.feature_layer.backward(leaky_relu_backward(da2, c.h2, self.slope))
        return self.input_layer.backward(leaky_relu_backward(da1, c.h1, self.slope))

    def _require_cache(self) -> _ForwardCache:
        if self._cache is None:
            raise ContractViolation("Discriminator backward called before forward")
        return self._cache

    def _input_gradient_parts(self, target: GradientTarget):
        c = self._require_cache()
        W1, W2, w3 = self.input_layer.weight(), self.feature_layer.weight(), self.output_layer.weight()[0]
        m1 = leaky_relu_grad(c.h1, self.slope)
        m2 = leaky_relu_grad(c.h2, self.slope)
        r = m2 * w3
        p = m1 * (r @ W2)
        u = p @ W1
        scale = c.d_out * (1.0 - c.d_out) if target == "probability" else np.ones_like(c.d_out)
        return c, W1, W2, m1, m2, r, p, u, scale

    def input_gradient(self, target: GradientTarget = "probability") -> np.ndarray:
        """Gradient of D_out (or of the logit) w.r.t. the input rows of the last forward"""
        *_, u, scale = self._input_gradient_parts(target)
        return scale[:, None] * u

    def input_gradient_backward(self, grad_input_gradient: np.ndarray, target: GradientTarget = "probability") -> None:
        """Accumulate parameter gradients of a loss that depends on `input_gradient(target)`.

        LeakyReLU masks are piecewise constant, so the only paths run through
        the three weight matrices and, for the probability target, through
        sigma'(z) = D(1 - D), which depends on every parameter via z.
        """
        c, W1, W2, m1, m2, r, p, u, scale = self._input_gradient_parts(target)
        g_u = scale[:, None] * grad_input_gradient
        self.input_layer.accumulate_weight_grad(p.T @ g_u)
        g_q = m1 * (g_u @ W1.T)
        self.feature_layer.accumulate_weight_grad(r.T @ g_q)
        g_r = g_q @ W2.T
        self.output_layer.accumulate_weight_grad((m2 * g_r).sum(axis=0)[None, :])
        if target == "probability":
            g_scale = (grad_input_gradient * u).sum(axis=1)
            grad_logits = g_scale * scale * (1.0 - 2.0 * c.d_out)
            self.backward(grad_logits=grad_logits)

    def _named(self, attr: str):
        out = {}
        for name, layer in zip(("input", "feature", "output"), self.layers):
            out.update(prefixed(name, getattr(layer, attr)()))
        return out

    def parameters(self):
        return self._named("parameters")

    def gradients(self):
        return self._named("gradients")

    def buffers(self):
        return self._named("buffers")

    def load_state_dict(self, state) -> None:
        super().load_state_dict(state)
        for layer in self.layers:
            if layer.spectral is not None:
                layer.spectral.sigma = estimate_sigma(layer.W, layer.spectral)


def discriminator_forward(D: DiscriminatorParams, doc_batch: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return D.forward(doc_batch)
