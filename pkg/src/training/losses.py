"""Adversarial objective: discriminator loss, gradient penalty and generator loss.

Each loss has a companion that returns dL/dD_out so the trainer can push it
back through the networks. Inputs are assumed clamped into (0, 1) by the
sigmoid.
"""
from typing import Optional, Tuple

import numpy as np

from src.errors import ContractViolation
from src.numerics.activations import SIGMOID_CLAMP


def _clamp(d: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(d, dtype=np.float64), SIGMOID_CLAMP, 1.0 - SIGMOID_CLAMP)


def discriminator_loss(d_out_real: np.ndarray, d_out_fake: np.ndarray) -> float:
    """mean(-log D(d_r) - log(1 - D(d_f)))"""
    d_r, d_f = _clamp(d_out_real), _clamp(d_out_fake)
    return float(np.mean(-np.log(d_r) - np.log1p(-d_f)))


def discriminator_loss_grads(d_out_real: np.ndarray, d_out_fake: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    d_r, d_f = _clamp(d_out_real), _clamp(d_out_fake)
    m = d_r.shape[0]
    return -1.0 / (m * d_r), 1.0 / (m * (1.0 - d_f))


def generator_loss(d_out_fake: np.ndarray, non_saturating: bool = False) -> float:
    """mean log(1 - D(G(theta))), or mean -log D(G(theta)) in the non-saturating form"""
    d_f = _clamp(d_out_fake)
    if non_saturating:
        return float(np.mean(-np.log(d_f)))
    return float(np.mean(np.log1p(-d_f)))


def generator_loss_grad(d_out_fake: np.ndarray, non_saturating: bool = False) -> np.ndarray:
    d_f = _clamp(d_out_fake)
    m = d_f.shape[0]
    if non_saturating:
        return -1.0 / (m * d_f)
    return -1.0 / (m * (1.0 - d_f))


def interpolate(
    d_real_batch: np.ndarray, d_fake_batch: np.ndarray, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """d* = eps d_r + (1 - eps) d_f with one eps ~ U[0, 1] per sample pair"""
    if d_real_batch.shape != d_fake_batch.shape:
        raise ContractViolation(
            f"Real and fake batches differ in shape: {d_real_batch.shape} vs {d_fake_batch.shape}"
        )
    eps = rng.uniform(0.0, 1.0, size=(d_real_batch.shape[0], 1))
    return eps * d_real_batch + (1.0 - eps) * d_fake_batch, eps[:, 0]


def penalty_from_gradients(grads: np.ndarray) -> Tuple[float, np.ndarray]:
    """Returns mean((||g|| - 1)^2) and its gradient w.r.t. the rows of g"""
    m = grads.shape[0]
    norms = np.linalg.norm(grads, axis=1)
    value = float(np.mean((norms - 1.0) ** 2))
    # at g = 0 the norm has no gradient; the zero subgradient is used
    safe = np.where(norms > 0, norms, 1.0)
    coeff = np.where(norms > 0, (2.0 / m) * (norms - 1.0) / safe, 0.0)
    return value, coeff[:, None] * grads


def gradient_penalty(
    D,
    d_real_batch: np.ndarray,
    d_fake_batch: np.ndarray,
    rng: np.random.Generator,
    target: str = "logit",
    weight: Optional[float] = None,
) -> float:
    """mean over the batch of (||grad_{d*} D(d*)||_2 - 1)^2 at random interpolates.

    When `weight` is given, weight * dL_gp/domega is accumulated into D's
    gradients, so the caller passes lambda here.
    """
    points, _ = interpolate(np.asarray(d_real_batch, dtype=np.float64), np.asarray(d_fake_batch, dtype=np.float64), rng)
    D.forward(points)
    grads = D.input_gradient(target)
    value, grad_of_grads = penalty_from_gradients(grads)
    if weight is not None and weight != 0.0:
        D.input_gradient_backward(weight * grad_of_grads, target)
    return value
