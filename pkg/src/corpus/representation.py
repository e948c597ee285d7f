from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import structlog

from src.corpus.records import DocumentRecord
from src.corpus.vocabulary import FieldVocabulary, field_vectorizer

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class DocVector:
    """Four per-field TF-IDF distributions of one document and their concatenation"""

    entity_dist: np.ndarray
    location_dist: np.ndarray
    keyword_dist: np.ndarray
    date_dist: np.ndarray

    @property
    def fields(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.entity_dist, self.location_dist, self.keyword_dist, self.date_dist)

    @property
    def concat(self) -> np.ndarray:
        return np.concatenate(self.fields)


@dataclass(frozen=True, eq=False)
class CorpusMatrix:
    """N x V document matrix; row order is the corpus order"""

    ids: Tuple[str, ...]
    matrix: np.ndarray
    field_sizes: Tuple[int, int, int, int]

    def __len__(self) -> int:
        return self.matrix.shape[0]

    @property
    def offsets(self) -> Tuple[int, ...]:
        return tuple(np.concatenate([[0], np.cumsum(self.field_sizes)]).astype(int))

    def row(self, i: int) -> DocVector:
        o = self.offsets
        r = self.matrix[i]
        return DocVector(*(r[o[k]:o[k + 1]].copy() for k in range(4)))


def normalize_field_counts(counts: np.ndarray, idf: np.ndarray) -> np.ndarray:
    """Rows of raw counts -> renormalized TF-IDF distributions.

    Rows without in-vocabulary tokens stay zero. Rows whose tf-idf mass is zero
    (every retained term has idf 0) fall back to the normalized tf.
    """
    counts = np.asarray(counts, dtype=np.float64)
    out = np.zeros_like(counts)
    totals = counts.sum(axis=1)
    nonzero = totals > 0
    if not nonzero.any():
        return out
    tf = counts[nonzero] / totals[nonzero, None]
    tfidf = tf * idf[None, :]
    mass = tfidf.sum(axis=1)
    dist = np.where(
        (mass > 0)[:, None],
        tfidf / np.where(mass > 0, mass, 1.0)[:, None],
        tf / tf.sum(axis=1, keepdims=True),
    )
    out[nonzero] = dist
    return out


def _field_counts(token_lists: List[List[str]], vocab: FieldVocabulary) -> np.ndarray:
    if vocab.is_empty:
        return np.zeros((len(token_lists), 0))
    # out-of-vocabulary tokens are dropped by the fixed vocabulary
    return field_vectorizer(vocabulary=vocab.terms).transform(token_lists).toarray()


def represent_document(doc: DocumentRecord, vocabs: Sequence[FieldVocabulary]) -> DocVector:
    dists = []
    for tokens, vocab in zip(doc.fields, vocabs):
        counts = _field_counts([list(tokens)], vocab)
        dists.append(normalize_field_counts(counts, vocab.idf)[0])
    return DocVector(*dists)


def represent_corpus(corpus: Sequence[DocumentRecord], vocabs: Sequence[FieldVocabulary]) -> CorpusMatrix:
    blocks = []
    for slot, vocab in enumerate(vocabs):
        counts = _field_counts([list(doc.fields[slot]) for doc in corpus], vocab)
        blocks.append(normalize_field_counts(counts, vocab.idf))
    matrix = np.hstack(blocks) if blocks else np.zeros((len(corpus), 0))
    sizes = tuple(len(v) for v in vocabs)
    logger.info("Corpus represented", documents=len(corpus), dimension=int(sum(sizes)), field_sizes=list(sizes))
    return CorpusMatrix(tuple(doc.id for doc in corpus), matrix, sizes)
