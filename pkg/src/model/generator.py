from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.errors import ContractViolation
from src.numerics.activations import leaky_relu, leaky_relu_backward, softmax, softmax_backward
from src.numerics.layers import DenseLayer, Module, prefixed
from src.numerics.normalization import BatchNorm, LayerNorm, Mode

SIMPLEX_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class FakeDoc:
    """A batch of generated documents: four field distributions per row"""

    blocks: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]

    @property
    def concat(self) -> np.ndarray:
        return np.hstack(self.blocks)

    def __len__(self) -> int:
        return self.blocks[0].shape[0]


class HiddenBlock(Module):
    """Linear -> LayerNorm -> LeakyReLU"""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator, slope: float, eps: float):
        self.dense = DenseLayer(in_features, out_features, rng)
        self.norm = LayerNorm(out_features, eps=eps)
        self.slope = slope
        self._s = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._s = self.norm.forward(self.dense.forward(x))
        return leaky_relu(self._s, self.slope)

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        ds = leaky_relu_backward(upstream, self._s, self.slope)
        return self.dense.backward(self.norm.backward(ds))

    def parameters(self):
        return {**prefixed("dense", self.dense.parameters()), **prefixed("norm", self.norm.parameters())}

    def gradients(self):
        return {**prefixed("dense", self.dense.gradients()), **prefixed("norm", self.norm.gradients())}


class Subnet(Module):
    """Linear -> BatchNorm -> softmax, producing one field distribution"""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator, momentum: float, eps: float):
        self.dense = DenseLayer(in_features, out_features, rng)
        self.norm = BatchNorm(out_features, momentum=momentum, eps=eps)
        self._y = None

    @property
    def out_features(self) -> int:
        return self.dense.out_features

    def forward(self, o_h: np.ndarray, mode: Mode) -> np.ndarray:
        self._y = softmax(self.norm.forward(self.dense.forward(o_h), mode))
        return self._y

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        return self.dense.backward(self.norm.backward(softmax_backward(upstream, self._y)))

    def parameters(self):
        return {**prefixed("dense", self.dense.parameters()), **prefixed("norm", self.norm.parameters())}

    def gradients(self):
        return {**prefixed("dense", self.dense.gradients()), **prefixed("norm", self.norm.gradients())}

    def buffers(self):
        return prefixed("norm", self.norm.buffers())


class GeneratorParams(Module):
    """Maps document-event distributions theta to four field distributions.

    theta -> Linear/LayerNorm/LeakyReLU (plus depth-3 extra H x H blocks) -> o_h,
    then four subnets share o_h and their outputs are concatenated in
    entity, location, keyword, date order.
    """

    def __init__(
        self,
        n_events: int,
        hidden_size: int,
        field_sizes: Sequence[int],
        rng: np.random.Generator,
        depth: int = 3,
        leaky_slope: float = 0.1,
        bn_momentum: float = 0.9,
        eps: float = 1e-5,
    ):
        if len(field_sizes) != 4:
            raise ContractViolation(f"Expected four field sizes, got {len(field_sizes)}")
        self.n_events = n_events
        self.hidden_size = hidden_size
        self.field_sizes = tuple(int(v) for v in field_sizes)
        self.depth = depth
        self.hidden: List[HiddenBlock] = [HiddenBlock(n_events, hidden_size, rng, leaky_slope, eps)]
        for _ in range(depth - 3):
            self.hidden.append(HiddenBlock(hidden_size, hidden_size, rng, leaky_slope, eps))
        self.subnets: List[Subnet] = [Subnet(hidden_size, v, rng, bn_momentum, eps) for v in self.field_sizes]

    @property
    def output_size(self) -> int:
        return sum(self.field_sizes)

    @property
    def batch_norms(self) -> List[BatchNorm]:
        return [s.norm for s in self.subnets]

    def check_simplex(self, theta: np.ndarray) -> None:
        if theta.ndim != 2 or theta.shape[1] != self.n_events:
            raise ContractViolation(f"theta must be m x {self.n_events}, got shape {theta.shape}")
        if np.any(theta < -SIMPLEX_TOLERANCE) or np.any(np.abs(theta.sum(axis=1) - 1.0) > SIMPLEX_TOLERANCE):
            raise ContractViolation("theta rows must lie on the probability simplex")

    def forward(self, theta: np.ndarray, mode: Mode = "training", validate: bool = True) -> FakeDoc:
        theta = np.atleast_2d(np.asarray(theta, dtype=np.float64))
        if validate:
            self.check_simplex(theta)
        o = theta
        for block in self.hidden:
            o = block.forward(o)
        return FakeDoc(tuple(subnet.forward(o, mode) for subnet in self.subnets))

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        """Backpropagate dL/d(concat output); returns dL/dtheta"""
        offsets = np.concatenate([[0], np.cumsum(self.field_sizes)])
        d_o = None
        for k, subnet in enumerate(self.subnets):
            d = subnet.backward(upstream[:, offsets[k]:offsets[k + 1]])
            d_o = d if d_o is None else d_o + d
        for block in reversed(self.hidden):
            d_o = block.backward(d_o)
        return d_o

    def _named(self, attr: str) -> Dict[str, np.ndarray]:
        out: Dict[str, np.ndarray] = {}
        for i, block in enumerate(self.hidden):
            out.update(prefixed(f"hidden.{i}", getattr(block, attr)()))
        for name, subnet in zip(("entity", "location", "keyword", "date"), self.subnets):
            out.update(prefixed(f"subnet.{name}", getattr(subnet, attr)()))
        return out

    def parameters(self):
        return self._named("parameters")

    def gradients(self):
        return self._named("gradients")

    def buffers(self):
        return self._named("buffers")


def generator_forward(G: GeneratorParams, theta_batch: np.ndarray, mode: Mode = "training") -> FakeDoc:
    return G.forward(theta_batch, mode)
