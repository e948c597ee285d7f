from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.config import TrainConfig
from src.errors import ConfigurationError, ContractViolation
from src.model.discriminator import DiscriminatorParams
from src.model.generator import GeneratorParams
from src.numerics.checkpoint import load_tensors, save_tensors
from src.numerics.layers import prefixed

logger = structlog.get_logger(__name__)

MIN_DIMENSION = 4


def check_field_sizes(field_sizes: Sequence[int]) -> Tuple[int, int, int, int]:
    if len(field_sizes) != 4:
        raise ConfigurationError(f"Expected four field sizes, got {len(field_sizes)}")
    sizes = tuple(int(v) for v in field_sizes)
    if any(v < 0 for v in sizes):
        raise ConfigurationError(f"Field sizes must be non-negative, got {sizes}")
    if sum(sizes) < MIN_DIMENSION:
        raise ConfigurationError(f"Document dimension V={sum(sizes)} is below {MIN_DIMENSION}; the vocabularies are too small")
    return sizes


def init_model(
    config: TrainConfig, field_sizes: Sequence[int], rng: np.random.Generator
) -> Tuple[GeneratorParams, DiscriminatorParams]:
    """Create G and D with shapes from the config and the corpus field sizes"""
    sizes = check_field_sizes(field_sizes)
    G = GeneratorParams(
        n_events=config.n_events,
        hidden_size=config.hidden_size,
        field_sizes=sizes,
        rng=rng,
        depth=config.depth,
        leaky_slope=config.leaky_slope,
        bn_momentum=config.bn_momentum,
        eps=config.norm_eps,
    )
    D = DiscriminatorParams(
        input_size=sum(sizes),
        hidden_size=config.disc_hidden_size,
        rng=rng,
        spectral_norm=config.spectral_norm,
        n_power_iterations=config.n_power_iterations,
        leaky_slope=config.leaky_slope,
    )
    logger.info(
        "Model initialized",
        n_events=config.n_events,
        depth=config.depth,
        generator_parameters=G.num_parameters(),
        discriminator_parameters=D.num_parameters(),
        dimension=sum(sizes),
    )
    return G, D


def save_model(
    path: Path,
    G: GeneratorParams,
    D: DiscriminatorParams,
    config: TrainConfig,
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """Checkpoint both networks, including running statistics and power-iteration vectors"""
    tensors = {**prefixed("generator", G.state_dict()), **prefixed("discriminator", D.state_dict())}
    meta = {
        "config": config.model_dump(),
        "field_sizes": list(G.field_sizes),
        **(metadata or {}),
    }
    path = save_tensors(path, tensors, meta)
    logger.info("Checkpoint saved", path=str(path), tensors=len(tensors))
    return path


def load_model(path: Path) -> Tuple[GeneratorParams, DiscriminatorParams, TrainConfig, Dict[str, Any]]:
    tensors, meta = load_tensors(path)
    try:
        config = TrainConfig.model_validate(meta["config"])
        field_sizes = meta["field_sizes"]
    except KeyError as e:
        raise ConfigurationError(f"Checkpoint {path} has no {e} metadata")
    # initial weights are overwritten below; the seed only fixes shapes
    G, D = init_model(config, field_sizes, np.random.default_rng(config.seed))
    try:
        G.load_state_dict(_strip("generator", tensors))
        D.load_state_dict(_strip("discriminator", tensors))
    except ContractViolation as e:
        raise ConfigurationError(f"Checkpoint {path} does not match its own config: {e}")
    return G, D, config, meta


def _strip(prefix: str, tensors: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
    head = prefix + "."
    return {k[len(head):]: v for k, v in tensors.items() if k.startswith(head)}
