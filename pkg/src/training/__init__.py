"""
Adversarial objective and the alternating training loop.
"""
from src.training.losses import (
    discriminator_loss,
    discriminator_loss_grads,
    generator_loss,
    generator_loss_grad,
    gradient_penalty,
    interpolate,
)
from src.training.trace import TraceRecord, TrainTrace, read_trace
from src.training.trainer import AdversarialTrainer, MinibatchSampler, has_converged, train

__all__ = [
    "AdversarialTrainer",
    "MinibatchSampler",
    "TraceRecord",
    "TrainTrace",
    "discriminator_loss",
    "discriminator_loss_grads",
    "generator_loss",
    "generator_loss_grad",
    "gradient_penalty",
    "has_converged",
    "interpolate",
    "read_trace",
    "train",
]
