from typing import List, Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field, model_validator

from src.corpus.records import EVENT_SCHEMA, DocumentRecord, FieldSchema
from src.evaluation.gold import GoldEvent

logger = structlog.get_logger(__name__)


class SyntheticSpec(BaseModel):
    """Recipe for a labelled corpus with known per-event field distributions.

    When `distributions` is omitted, each event draws `terms_per_event` terms
    per field and Dirichlet(1) weights over them from `seed`.
    """

    model_config = {"frozen": True, "extra": "forbid"}

    true_events: int = Field(10, ge=1)
    docs_per_event: int = Field(100, ge=1)
    field_vocab_sizes: Tuple[int, int, int, int] = (40, 40, 40, 40)
    terms_per_event: int = Field(5, ge=1)
    # true_events x 4 x field size; rows must be probability vectors
    distributions: Optional[List[List[List[float]]]] = None
    noise_rate: float = Field(0.2, ge=0.0, lt=1.0)
    tokens_per_field: int = Field(8, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_distributions(self):
        if any(v < 1 for v in self.field_vocab_sizes):
            raise ValueError("every field vocabulary needs at least one term")
        if self.distributions is None:
            return self
        if len(self.distributions) != self.true_events:
            raise ValueError(f"expected {self.true_events} event distributions, got {len(self.distributions)}")
        for t, fields in enumerate(self.distributions):
            if len(fields) != 4:
                raise ValueError(f"event {t} needs four field distributions")
            for k, dist in enumerate(fields):
                p = np.asarray(dist, dtype=np.float64)
                if p.size != self.field_vocab_sizes[k] or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
                    raise ValueError(f"event {t} field {k} is not a probability vector over its vocabulary")
        return self


def field_terms(schema: FieldSchema, sizes: Tuple[int, int, int, int]) -> List[List[str]]:
    return [[f"{label}{i:03d}" for i in range(size)] for label, size in zip(schema.labels, sizes)]


def ground_truth(spec: SyntheticSpec, rng: np.random.Generator) -> List[List[np.ndarray]]:
    """Per event, the four field distributions"""
    if spec.distributions is not None:
        return [[np.asarray(d, dtype=np.float64) for d in fields] for fields in spec.distributions]
    truth = []
    for _ in range(spec.true_events):
        fields = []
        for size in spec.field_vocab_sizes:
            support = rng.choice(size, size=min(spec.terms_per_event, size), replace=False)
            p = np.zeros(size)
            p[support] = rng.dirichlet(np.ones(support.size))
            fields.append(p)
        truth.append(fields)
    return truth


def generate_synthetic_corpus(
    spec: SyntheticSpec, rng: Optional[np.random.Generator] = None, schema: FieldSchema = EVENT_SCHEMA
) -> Tuple[List[DocumentRecord], List[str], list]:
    """Draw a labelled corpus; returns (records, gold label per record, ground-truth distributions).

    Each token comes from the document's event distribution, or with
    probability `noise_rate` uniformly from the whole field vocabulary.
    """
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    truth = ground_truth(spec, rng)
    terms = field_terms(schema, spec.field_vocab_sizes)
    events = np.repeat(np.arange(spec.true_events), spec.docs_per_event)
    rng.shuffle(events)
    corpus, labels = [], []
    for n, t in enumerate(events):
        fields = []
        for k, size in enumerate(spec.field_vocab_sizes):
            noise = rng.random(spec.tokens_per_field) < spec.noise_rate
            drawn = rng.choice(size, size=spec.tokens_per_field, p=truth[t][k])
            uniform = rng.integers(0, size, size=spec.tokens_per_field)
            fields.append([terms[k][i] for i in np.where(noise, uniform, drawn)])
        label = f"event_{t + 1:02d}"
        corpus.append(
            DocumentRecord(
                id=f"doc{n:05d}",
                entities=fields[0],
                locations=fields[1],
                keywords=fields[2],
                dates=fields[3],
                gold_event=label,
            )
        )
        labels.append(label)
    logger.info("Synthetic corpus generated", documents=len(corpus), events=spec.true_events, noise_rate=spec.noise_rate)
    return corpus, labels, truth


def gold_from_synthetic(
    spec: SyntheticSpec, truth: list, top_k: int = 10, schema: FieldSchema = EVENT_SCHEMA
) -> List[GoldEvent]:
    """Reference sets from the ground truth: the (up to) k most probable terms with nonzero mass"""
    terms = field_terms(schema, spec.field_vocab_sizes)
    gold = []
    for t, fields in enumerate(truth):
        sets = []
        for k, p in enumerate(fields):
            order = sorted((i for i in range(p.size) if p[i] > 0), key=lambda i: (-p[i], terms[k][i]))
            sets.append(frozenset(terms[k][i] for i in order[:top_k]))
        gold.append(GoldEvent(f"event_{t + 1:02d}", tuple(sets)))
    return gold
