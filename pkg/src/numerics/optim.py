from dataclasses import dataclass, field
from typing import Dict

import numpy as np
import structlog

logger = structlog.get_logger(__name__)


@dataclass
class AdamState:
    lr: float = 0.0002
    beta1: float = 0.5
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)


class Adam:
    """Bias-corrected Adam over a dict of named parameter arrays (updated in place)"""

    def __init__(self, lr: float = 0.0002, beta1: float = 0.5, beta2: float = 0.999, eps: float = 1e-8):
        self.state = AdamState(lr=lr, beta1=beta1, beta2=beta2, eps=eps)

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> bool:
        """Apply one update. A non-finite gradient rejects the whole step and returns False."""
        for name, g in grads.items():
            if not np.all(np.isfinite(g)):
                logger.warning("Adam step rejected: non-finite gradient", parameter=name, t=self.state.t)
                return False
        adam_step(params, grads, self.state)
        return True


def adam_step(params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray], state: AdamState) -> None:
    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t
    for name, p in params.items():
        g = grads[name]
        if name not in state.m:
            state.m[name] = np.zeros_like(p)
            state.v[name] = np.zeros_like(p)
        m, v = state.m[name], state.v[name]
        if m.shape != p.shape:
            raise ValueError(f"Adam state for {name} has shape {m.shape}, parameter has {p.shape}")
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        p -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
