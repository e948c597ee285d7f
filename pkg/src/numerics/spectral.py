from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

SPECTRAL_EPS = 1e-12
# sweep cap and relative sigma tolerance for a converged estimate
SPECTRAL_MAX_ITERATIONS = 10000
SPECTRAL_TOL = 1e-12


def l2normalize(v: np.ndarray, eps: float = SPECTRAL_EPS) -> np.ndarray:
    return v / (np.linalg.norm(v) + eps)


@dataclass
class SpectralState:
    """Persistent power-iteration vectors of one weight matrix.

    u is the left singular estimate (out), v the right one (in). Both survive
    across training steps so a single iteration per step stays accurate.
    """

    u: np.ndarray
    v: np.ndarray
    n_power_iterations: int = 1
    sigma: float = 1.0

    @classmethod
    def create(cls, out_features: int, in_features: int, rng: np.random.Generator, n_power_iterations: int = 1) -> "SpectralState":
        u = l2normalize(rng.standard_normal(out_features))
        v = l2normalize(rng.standard_normal(in_features))
        return cls(u=u, v=v, n_power_iterations=n_power_iterations)


def power_iteration(W: np.ndarray, state: SpectralState, n_iterations: int, tol: Optional[float] = None) -> int:
    """Refine u and v in place: v <- normalize(W^T u), u <- normalize(W v).

    With `tol`, iteration stops early once sigma_hat moves by less than
    tol * sigma_hat between sweeps, and `n_iterations` is only the cap.
    Returns the number of sweeps run.
    """
    u, v = state.u, state.v
    sigma = estimate_sigma(W, state)
    done = 0
    for _ in range(n_iterations):
        wu = W.T @ u
        if not wu.any():
            # W^T u vanished; keep the last estimate
            break
        v = l2normalize(wu)
        u = l2normalize(W @ v)
        done += 1
        if tol is not None:
            previous, sigma = sigma, max(float(u @ W @ v), SPECTRAL_EPS)
            if abs(sigma - previous) <= tol * sigma:
                break
    state.u, state.v = u, v
    state.sigma = estimate_sigma(W, state)
    return done


def estimate_sigma(W: np.ndarray, state: SpectralState) -> float:
    """sigma_hat = u^T W v, guarded away from zero"""
    return max(float(state.u @ W @ state.v), SPECTRAL_EPS)


def normalized_weight(W: np.ndarray, state: SpectralState) -> Tuple[np.ndarray, float]:
    sigma = estimate_sigma(W, state)
    return W / sigma, sigma


def spectral_weight_grad(grad_normalized: np.ndarray, W: np.ndarray, state: SpectralState) -> np.ndarray:
    """Map dL/d(W/sigma) back to dL/dW with sigma = u^T W v (u, v held fixed).

    d(W/sigma) = dW/sigma - W (u^T dW v)/sigma^2, so
    dL/dW = (G - <G, W/sigma> u v^T) / sigma.
    """
    sigma = estimate_sigma(W, state)
    if sigma <= SPECTRAL_EPS:
        return grad_normalized / sigma
    W_sn = W / sigma
    return (grad_normalized - np.sum(grad_normalized * W_sn) * np.outer(state.u, state.v)) / sigma
