import sys
import time
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
import structlog
from tqdm import tqdm

from src.config import TrainConfig
from src.errors import ConfigurationError, NonFiniteError
from src.model import DiscriminatorParams, GeneratorParams, init_model, save_model
from src.numerics.dirichlet import DirichletPrior, sample_dirichlet
from src.numerics.optim import Adam
from src.training.losses import (
    discriminator_loss,
    discriminator_loss_grads,
    generator_loss,
    generator_loss_grad,
    gradient_penalty,
)
from src.training.trace import TraceRecord, TrainTrace
from src.utils.fingerprint import tensor_digest

logger = structlog.get_logger(__name__)


class MinibatchSampler:
    """Real-document minibatches cut from a stream of epoch permutations.

    Batches are consecutive slices of perm_1 ++ perm_2 ++ ..., so each
    epoch's N draws contain every document exactly once; a batch may straddle
    two epochs.
    """

    def __init__(self, n_documents: int, batch_size: int, rng: np.random.Generator):
        if n_documents < batch_size:
            raise ConfigurationError(f"Corpus has {n_documents} documents, fewer than the batch size {batch_size}")
        self.n = n_documents
        self.m = batch_size
        self.rng = rng
        self.epoch = 0
        self._order = np.empty(0, dtype=np.int64)
        self._pos = 0

    def next_indices(self) -> np.ndarray:
        out = []
        need = self.m
        while need > 0:
            if self._pos >= self._order.size:
                self._order = self.rng.permutation(self.n)
                self._pos = 0
                self.epoch += 1
            take = min(need, self._order.size - self._pos)
            out.append(self._order[self._pos:self._pos + take])
            self._pos += take
            need -= take
        return np.concatenate(out)


def has_converged(gen_losses: np.ndarray, window: int, tolerance: float) -> bool:
    """Relative change of the windowed mean generator loss fell below tolerance"""
    if gen_losses.size < 2 * window:
        return False
    previous = float(np.mean(gen_losses[-2 * window:-window]))
    current = float(np.mean(gen_losses[-window:]))
    return abs(current - previous) <= tolerance * max(abs(previous), 1e-12)


class AdversarialTrainer:
    """Alternating optimization: n_critic discriminator steps, then one generator step"""

    def __init__(
        self,
        G: GeneratorParams,
        D: DiscriminatorParams,
        config: TrainConfig,
        rng: np.random.Generator,
        checkpoint_dir: Optional[Path] = None,
        checkpoint_metadata: Optional[Dict[str, Any]] = None,
    ):
        self.G = G
        self.D = D
        self.config = config
        self.rng = rng
        self.prior = DirichletPrior.from_values(config.alpha)
        self.d_optimizer = Adam(config.learning_rate, config.beta1, config.beta2, config.adam_eps)
        self.g_optimizer = Adam(config.learning_rate, config.beta1, config.beta2, config.adam_eps)
        self.checkpoint_dir = Path(checkpoint_dir) if checkpoint_dir is not None else None
        self.checkpoint_metadata = checkpoint_metadata
        self.trace = TrainTrace()
        self.d_updates = 0
        self.g_updates = 0

    def sample_theta(self) -> np.ndarray:
        return sample_dirichlet(self.prior, self.rng, self.config.batch_size)

    def discriminator_step(self, real: np.ndarray, fake: Optional[np.ndarray] = None) -> Tuple[float, float, float]:
        """One critic update; `fake` defaults to G applied to a fresh theta batch"""
        cfg = self.config
        if cfg.spectral_norm:
            self.D.refresh_spectral(cfg.n_power_iterations)
        if fake is None:
            fake = self.G.forward(self.sample_theta(), "training").concat
        self.D.zero_grad()
        m = real.shape[0]
        _, d_out = self.D.forward(np.vstack([real, fake]))
        d_real, d_fake = d_out[:m], d_out[m:]
        self.D.backward(grad_d_out=np.concatenate(discriminator_loss_grads(d_real, d_fake)))
        loss_d = discriminator_loss(d_real, d_fake)
        loss_gp = 0.0
        if cfg.gradient_penalty:
            loss_gp = gradient_penalty(self.D, real, fake, self.rng, target=cfg.gp_target, weight=cfg.gp_lambda)
        total = loss_d + cfg.gp_lambda * loss_gp
        self._check_finite("discriminator", L_d=loss_d, L_gp=loss_gp, L=total)
        if not self.d_optimizer.step(self.D.parameters(), self.D.gradients()):
            raise NonFiniteError("Non-finite discriminator gradient", trace=self.trace)
        self.d_updates += 1
        self.trace.d_losses.append((loss_d, loss_gp, total))
        return loss_d, loss_gp, total

    def generator_step(self) -> float:
        cfg = self.config
        self.G.zero_grad()
        fake = self.G.forward(self.sample_theta(), "training")
        _, d_fake = self.D.forward(fake.concat)
        loss_g = generator_loss(d_fake, cfg.non_saturating)
        self._check_finite("generator", gen_loss=loss_g)
        grad_input = self.D.backward(grad_d_out=generator_loss_grad(d_fake, cfg.non_saturating))
        self.G.backward(grad_input)
        # D's gradients from this pass are discarded; the next D step zeroes them
        if not self.g_optimizer.step(self.G.parameters(), self.G.gradients()):
            raise NonFiniteError("Non-finite generator gradient", trace=self.trace)
        self.g_updates += 1
        return loss_g

    def _check_finite(self, network: str, **losses: float) -> None:
        bad = {k: v for k, v in losses.items() if not np.isfinite(v)}
        if bad:
            logger.error("Non-finite loss", network=network, iteration=self.g_updates, **bad)
            raise NonFiniteError(f"Non-finite {network} loss at iteration {self.g_updates}: {bad}", trace=self.trace)

    def fit(self, corpus_matrix: np.ndarray, progress: Optional[bool] = None) -> TrainTrace:
        cfg = self.config
        data = np.asarray(corpus_matrix, dtype=np.float64)
        if data.ndim != 2 or data.shape[1] != self.D.input_size:
            raise ConfigurationError(
                f"Corpus matrix has shape {data.shape}, the discriminator expects {self.D.input_size} columns"
            )
        sampler = MinibatchSampler(data.shape[0], cfg.batch_size, self.rng)
        if progress is None:
            progress = sys.stderr.isatty()
        logger.info(
            "Training started",
            documents=data.shape[0],
            dimension=data.shape[1],
            n_events=cfg.n_events,
            n_critic=cfg.n_critic,
            batch_size=cfg.batch_size,
            gp_lambda=cfg.gp_lambda,
            max_g_steps=cfg.max_g_steps,
        )
        start = time.perf_counter()
        bar = tqdm(total=cfg.max_g_steps, desc="generator steps", disable=not progress, leave=False)
        try:
            for iteration in range(1, cfg.max_g_steps + 1):
                for _ in range(cfg.n_critic):
                    loss_d, loss_gp, total = self.discriminator_step(data[sampler.next_indices()])
                loss_g = self.generator_step()
                self.trace.append(
                    TraceRecord(
                        iteration=iteration,
                        L_d=loss_d,
                        L_gp=loss_gp,
                        L=total,
                        gen_loss=loss_g,
                        seconds=time.perf_counter() - start,
                        d_updates=self.d_updates,
                        g_updates=self.g_updates,
                    )
                )
                bar.update(1)
                bar.set_postfix(L=f"{total:.4f}", gen=f"{loss_g:.4f}")
                if cfg.checkpoint_every and self.checkpoint_dir and iteration % cfg.checkpoint_every == 0:
                    path = self.checkpoint_dir / f"checkpoint_{iteration:06d}.npz"
                    self.trace.checkpoints.append(save_model(path, self.G, self.D, cfg, self.checkpoint_metadata))
                if iteration >= cfg.min_g_steps and has_converged(
                    self.trace.generator_losses, cfg.convergence_window, cfg.tolerance
                ):
                    self.trace.converged = True
                    self.trace.stop_reason = "converged"
                    break
            else:
                self.trace.stop_reason = "max_g_steps"
        finally:
            bar.close()
        self.trace.generator_snapshot = tensor_digest(self.G.state_dict())
        self.trace.discriminator_snapshot = tensor_digest(self.D.state_dict())
        logger.info(
            "Training finished",
            iterations=len(self.trace),
            stop_reason=self.trace.stop_reason,
            seconds=round(self.trace.total_seconds, 3),
            d_updates=self.d_updates,
            g_updates=self.g_updates,
        )
        return self.trace


def train(
    corpus_matrix: np.ndarray,
    config: TrainConfig,
    rng: Optional[np.random.Generator] = None,
    checkpoint_dir: Optional[Path] = None,
    field_sizes: Optional[Tuple[int, int, int, int]] = None,
    progress: Optional[bool] = None,
    checkpoint_metadata: Optional[Dict[str, Any]] = None,
) -> Tuple[GeneratorParams, DiscriminatorParams, TrainTrace]:
    """Initialize G and D and run the adversarial loop on an N x V document matrix.

    `corpus_matrix` may be a `CorpusMatrix`, which also supplies the field
    sizes; a bare array needs `field_sizes`.
    """
    if hasattr(corpus_matrix, "field_sizes"):
        field_sizes = field_sizes or corpus_matrix.field_sizes
        corpus_matrix = corpus_matrix.matrix
    if field_sizes is None:
        raise ConfigurationError("field_sizes are required when training on a bare matrix")
    if corpus_matrix.shape[0] < config.batch_size:
        raise ConfigurationError(
            f"Corpus has {corpus_matrix.shape[0]} documents, fewer than the batch size {config.batch_size}"
        )
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    G, D = init_model(config, field_sizes, rng)
    trainer = AdversarialTrainer(G, D, config, rng, checkpoint_dir, checkpoint_metadata)
    trace = trainer.fit(corpus_matrix, progress=progress)
    return G, D, trace
