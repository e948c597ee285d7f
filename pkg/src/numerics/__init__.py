"""
Differentiable building blocks in double precision: dense layers, layer and
batch normalization, activations, spectral normalization, Adam, a Dirichlet
sampler, a finite-difference gradient checker and the checkpoint container.
"""
from src.numerics.activations import (
    leaky_relu,
    leaky_relu_backward,
    sigmoid,
    sigmoid_backward,
    softmax,
    softmax_backward,
)
from src.numerics.checkpoint import load_tensors, save_tensors
from src.numerics.dirichlet import DirichletPrior, sample_dirichlet
from src.numerics.gradcheck import GradientReport, gradient_check, parameter_gradient_check
from src.numerics.layers import DenseLayer, Module, spectral_normalize
from src.numerics.normalization import BatchNorm, LayerNorm, batch_norm, layer_norm
from src.numerics.optim import Adam, AdamState, adam_step
from src.numerics.spectral import SpectralState, power_iteration


__all__ = [
    "Adam",
    "AdamState",
    "BatchNorm",
    "DenseLayer",
    "DirichletPrior",
    "GradientReport",
    "LayerNorm",
    "Module",
    "SpectralState",
    "adam_step",
    "batch_norm",
    "gradient_check",
    "layer_norm",
    "leaky_relu",
    "leaky_relu_backward",
    "load_tensors",
    "parameter_gradient_check",
    "power_iteration",
    "sample_dirichlet",
    "save_tensors",
    "sigmoid",
    "sigmoid_backward",
    "softmax",
    "softmax_backward",
    "spectral_normalize",
]
