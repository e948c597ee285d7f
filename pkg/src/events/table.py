from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.corpus.records import EVENT_SCHEMA, FieldSchema
from src.errors import ConfigurationError, ContractViolation
from src.model.generator import GeneratorParams

logger = structlog.get_logger(__name__)

Terms = Tuple[str, ...]


@dataclass(frozen=True, eq=False)
class EventSeed:
    """One-hot generator input selecting event `index` (1-based)"""

    index: int
    vector: np.ndarray

    @classmethod
    def create(cls, index: int, n_events: int) -> "EventSeed":
        if not 1 <= index <= n_events:
            raise ContractViolation(f"Event index {index} outside 1..{n_events}")
        vector = np.zeros(n_events)
        vector[index - 1] = 1.0
        return cls(index, vector)


@dataclass(frozen=True, eq=False)
class DecodedEvent:
    index: int
    distributions: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    support: int = 0

    @property
    def concat(self) -> np.ndarray:
        return np.concatenate(self.distributions)


@dataclass(frozen=True, eq=False)
class EventTable:
    """Decoded events with the term lists needed to read them.

    `terms` holds the vocabulary of each field in dimension order.
    """

    events: Tuple[DecodedEvent, ...]
    terms: Tuple[Terms, Terms, Terms, Terms]
    labels: Tuple[str, str, str, str] = EVENT_SCHEMA.labels

    def __len__(self) -> int:
        return len(self.events)

    @property
    def field_sizes(self) -> Tuple[int, int, int, int]:
        return tuple(len(t) for t in self.terms)

    def concat_matrix(self) -> np.ndarray:
        if not self.events:
            return np.zeros((0, sum(self.field_sizes)))
        return np.vstack([e.concat for e in self.events])

    def top_words(self, n: int = 5) -> List[Tuple[List[str], List[str], List[str], List[str]]]:
        return [top_words(e, self.terms, n) for e in self.events]

    def with_supports(self, supports: Sequence[int]) -> "EventTable":
        events = tuple(replace(e, support=int(s)) for e, s in zip(self.events, supports))
        return replace(self, events=events)

    def subset(self, keep: Sequence[int]) -> "EventTable":
        """Keep events by position, preserving order"""
        return replace(self, events=tuple(self.events[i] for i in keep))


def _terms_of(vocab) -> Terms:
    return tuple(getattr(vocab, "terms", vocab))


def ranked_indices(distribution: np.ndarray, terms: Sequence[str], n: Optional[int] = None) -> List[int]:
    """Indices by descending probability, ties broken by term"""
    order = sorted(range(len(terms)), key=lambda i: (-float(distribution[i]), terms[i]))
    return order if n is None else order[:n]


def top_words(event: DecodedEvent, vocabs: Sequence, n: int = 5) -> Tuple[List[str], List[str], List[str], List[str]]:
    """N highest-probability terms per field; N larger than a field's vocabulary returns all of it"""
    out = []
    for dist, vocab in zip(event.distributions, vocabs):
        terms = _terms_of(vocab)
        out.append([terms[i] for i in ranked_indices(dist, terms, n)])
    return tuple(out)


def decode_events(
    G: GeneratorParams,
    n_events: Optional[int] = None,
    vocabs: Optional[Sequence] = None,
    schema: FieldSchema = EVENT_SCHEMA,
) -> EventTable:
    """Feed every one-hot seed through G in inference mode and split the output per field"""
    n_events = n_events or G.n_events
    if n_events != G.n_events:
        raise ConfigurationError(f"Generator was trained with {G.n_events} events, asked to decode {n_events}")
    if not all(bn.populated for bn in G.batch_norms):
        raise ContractViolation("Batch-norm running statistics are not populated; train the generator first")
    seeds = np.vstack([EventSeed.create(t, n_events).vector for t in range(1, n_events + 1)])
    fake = G.forward(seeds, "inference")
    events = tuple(
        DecodedEvent(index=t + 1, distributions=tuple(block[t].copy() for block in fake.blocks))
        for t in range(n_events)
    )
    if vocabs is not None:
        terms = tuple(_terms_of(v) for v in vocabs)
        if tuple(len(t) for t in terms) != G.field_sizes:
            raise ConfigurationError(
                f"Vocabulary sizes {[len(t) for t in terms]} do not match the generator {list(G.field_sizes)}"
            )
    else:
        terms = tuple(tuple(f"{label}_{i}" for i in range(size)) for label, size in zip(schema.labels, G.field_sizes))
    logger.info("Events decoded", events=n_events)
    return EventTable(events=events, terms=terms, labels=schema.labels)
