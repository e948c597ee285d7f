from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import structlog
from sklearn.cluster import KMeans

from src.corpus.records import EVENT_SCHEMA
from src.errors import ConfigurationError
from src.events.table import DecodedEvent, EventTable

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    n_iter: int
    # centroids read as events, one per cluster, for matching against gold
    events: Optional[EventTable] = None


def _normalize_block(block: np.ndarray) -> np.ndarray:
    mass = block.sum()
    return block / mass if mass > 0 else block.copy()


def centroids_as_events(
    centroids: np.ndarray, terms: Sequence[Sequence[str]], labels=EVENT_SCHEMA.labels, supports=None
) -> EventTable:
    sizes = [len(t) for t in terms]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    events = tuple(
        DecodedEvent(
            index=c + 1,
            distributions=tuple(_normalize_block(centroids[c, offsets[k]:offsets[k + 1]]) for k in range(4)),
            support=int(supports[c]) if supports is not None else 0,
        )
        for c in range(centroids.shape[0])
    )
    return EventTable(events=events, terms=tuple(tuple(t) for t in terms), labels=tuple(labels))


def kmeans_baseline(
    doc_vectors: np.ndarray,
    k: int,
    seed: int = 0,
    n_init: int = 10,
    terms: Optional[Sequence[Sequence[str]]] = None,
    labels=EVENT_SCHEMA.labels,
    max_iter: int = 300,
) -> KMeansResult:
    """K-means++ seeded Lloyd iterations, best of `n_init` restarts by inertia.

    With `terms` (per-field vocabularies), centroids are split into field
    blocks and returned as an event table.
    """
    X = np.asarray(doc_vectors, dtype=np.float64)
    if not 1 <= k <= X.shape[0]:
        raise ConfigurationError(f"k={k} must lie in 1..{X.shape[0]} (number of documents)")
    model = KMeans(n_clusters=k, init="k-means++", n_init=n_init, random_state=seed, max_iter=max_iter)
    cluster_labels = model.fit_predict(X)
    events = None
    if terms is not None:
        supports = np.bincount(cluster_labels, minlength=k)
        events = centroids_as_events(model.cluster_centers_, terms, labels, supports)
    logger.info("K-means baseline fitted", k=k, inertia=float(model.inertia_), iterations=int(model.n_iter_))
    return KMeansResult(cluster_labels, model.cluster_centers_, float(model.inertia_), int(model.n_iter_), events)
