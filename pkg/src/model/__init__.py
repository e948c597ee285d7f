"""
Generator and discriminator networks assembled from the numerics blocks.
"""
from src.model.discriminator import DiscriminatorParams, discriminator_forward
from src.model.factory import check_field_sizes, init_model, load_model, save_model
from src.model.generator import FakeDoc, GeneratorParams, generator_forward

__all__ = [
    "DiscriminatorParams",
    "FakeDoc",
    "GeneratorParams",
    "check_field_sizes",
    "discriminator_forward",
    "generator_forward",
    "init_model",
    "load_model",
    "save_model",
]
