from dataclasses import dataclass
from typing import List, Optional, Set, Tuple

import numpy as np
import structlog

from src.errors import ConfigurationError, ContractViolation
from src.events.table import EventTable, ranked_indices

logger = structlog.get_logger(__name__)

NULL_EVENT = -1


@dataclass(frozen=True, eq=False)
class Assignment:
    """Per-document event index (1-based, NULL_EVENT for zero documents) and cosine score"""

    event_index: np.ndarray
    score: np.ndarray

    def __len__(self) -> int:
        return self.event_index.shape[0]

    def supports(self, table: EventTable) -> List[int]:
        return [int(np.sum(self.event_index == e.index)) for e in table.events]


def assign_documents(doc_vectors: np.ndarray, events: EventTable) -> Assignment:
    """Assign each document to the event whose concatenated distributions are most cosine-similar.

    Ties go to the earlier event. All-zero documents get NULL_EVENT and score 0.
    """
    if len(events) == 0:
        raise ConfigurationError("Cannot assign documents to an empty event table")
    docs = np.atleast_2d(np.asarray(doc_vectors, dtype=np.float64))
    centers = events.concat_matrix()
    if docs.shape[1] != centers.shape[1]:
        raise ContractViolation(f"Documents have dimension {docs.shape[1]}, events have {centers.shape[1]}")
    doc_norms = np.linalg.norm(docs, axis=1)
    center_norms = np.linalg.norm(centers, axis=1)
    safe_docs = np.where(doc_norms > 0, doc_norms, 1.0)
    safe_centers = np.where(center_norms > 0, center_norms, 1.0)
    similarity = (docs / safe_docs[:, None]) @ (centers / safe_centers[:, None]).T
    best = np.argmax(similarity, axis=1)
    score = similarity[np.arange(docs.shape[0]), best]
    indices = np.array([events.events[b].index for b in best], dtype=np.int64)
    null = doc_norms == 0
    indices[null] = NULL_EVENT
    score[null] = 0.0
    return Assignment(indices, score)


def keyword_slot(labels: Tuple[str, ...]) -> int:
    return labels.index("keyword") if "keyword" in labels else 2


def top_keyword_sets(events: EventTable, k: int = 10) -> List[Set[str]]:
    slot = keyword_slot(events.labels)
    terms = events.terms[slot]
    return [{terms[i] for i in ranked_indices(e.distributions[slot], terms, k)} for e in events.events]


def jaccard(a: Set[str], b: Set[str]) -> float:
    union = a | b
    return len(a & b) / len(union) if union else 0.0


def merge_duplicate_events(
    events: EventTable,
    overlap_threshold: float = 0.5,
    doc_vectors: Optional[np.ndarray] = None,
    top_k: int = 10,
) -> EventTable:
    """Greedily drop near-duplicate events.

    Pairs are visited by descending keyword Jaccard overlap (ties by position);
    for each pair at or above the threshold whose events are both still present,
    the one with smaller support is dropped (the later one on equal support).
    Supports come from `doc_vectors` when given, and are recomputed on the
    merged table.
    """
    if not 0.0 < overlap_threshold <= 1.0:
        raise ConfigurationError(f"Merge threshold must lie in (0, 1], got {overlap_threshold}")
    if doc_vectors is not None and len(events):
        events = events.with_supports(assign_documents(doc_vectors, events).supports(events))
    keywords = top_keyword_sets(events, top_k)
    n = len(events)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            overlap = jaccard(keywords[i], keywords[j])
            if overlap >= overlap_threshold:
                pairs.append((-overlap, i, j))
    alive = [True] * n
    for _, i, j in sorted(pairs):
        if not (alive[i] and alive[j]):
            continue
        drop = i if events.events[i].support < events.events[j].support else j
        alive[drop] = False
    merged = events.subset([i for i in range(n) if alive[i]])
    if doc_vectors is not None and len(merged):
        merged = merged.with_supports(assign_documents(doc_vectors, merged).supports(merged))
    logger.info("Duplicate events merged", before=n, after=len(merged), threshold=overlap_threshold)
    return merged
