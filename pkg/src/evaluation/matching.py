from dataclasses import dataclass, field
from typing import List, Sequence, Union

import numpy as np
import structlog
from scipy.optimize import linear_sum_assignment

from src.errors import ConfigurationError
from src.evaluation.gold import GoldEvent, TermSets
from src.events.assignment import jaccard
from src.events.table import EventTable, ranked_indices

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class Match:
    predicted: int
    gold: str
    similarity: float
    correct: bool


@dataclass
class Matching:
    matches: List[Match]
    num_predicted: int
    num_gold: int
    threshold: float
    # correctness per predicted position; unmatched predictions are incorrect
    correct: List[bool] = field(default_factory=list)

    @property
    def num_correct(self) -> int:
        return sum(self.correct)

    @property
    def matched_gold(self) -> int:
        return sum(1 for m in self.matches if m.correct)


def predicted_term_sets(predicted: Union[EventTable, Sequence[TermSets]], top_k: int = 10) -> List[TermSets]:
    if isinstance(predicted, EventTable):
        # zero-mass terms (e.g. of K-means centroids) never count as representative
        return [
            tuple(
                frozenset(terms[i] for i in ranked_indices(dist, terms, top_k) if dist[i] > 0)
                for dist, terms in zip(event.distributions, predicted.terms)
            )
            for event in predicted.events
        ]
    return [tuple(frozenset(s) for s in sets) for sets in predicted]


def event_similarity(predicted: TermSets, gold: TermSets) -> float:
    """Mean per-field Jaccard overlap; a field empty on both sides counts as agreeing"""
    return float(np.mean([jaccard(set(p), set(g)) if (p or g) else 1.0 for p, g in zip(predicted, gold)]))


def similarity_matrix(predicted: Sequence[TermSets], gold: Sequence[GoldEvent]) -> np.ndarray:
    out = np.zeros((len(predicted), len(gold)))
    for i, p in enumerate(predicted):
        for j, g in enumerate(gold):
            out[i, j] = event_similarity(p, g.terms)
    return out


def match_events(
    predicted: Union[EventTable, Sequence[TermSets]],
    gold: Sequence[GoldEvent],
    top_k: int = 10,
    threshold: float = 0.3,
) -> Matching:
    """One-to-one matching of predicted to gold events maximizing total similarity (Hungarian method)"""
    if not gold:
        raise ConfigurationError("Gold event set is empty")
    sets = predicted_term_sets(predicted, top_k)
    correct = [False] * len(sets)
    matches: List[Match] = []
    if sets:
        sim = similarity_matrix(sets, gold)
        rows, cols = linear_sum_assignment(sim, maximize=True)
        for r, c in zip(rows, cols):
            ok = bool(sim[r, c] >= threshold)
            matches.append(Match(int(r), gold[c].name, float(sim[r, c]), ok))
            correct[r] = ok
    logger.info(
        "Events matched",
        predicted=len(sets),
        gold=len(gold),
        correct=sum(correct),
        threshold=threshold,
    )
    return Matching(matches, len(sets), len(gold), threshold, correct)
