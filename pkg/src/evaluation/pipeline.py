import time
from typing import List, Optional, Sequence

import numpy as np

from src.config import EvalSettings, EventSettings, TrainConfig
from src.corpus.records import EVENT_SCHEMA, FieldSchema
from src.evaluation.gold import GoldEvent
from src.evaluation.kmeans import kmeans_baseline
from src.evaluation.matching import match_events
from src.evaluation.metrics import EvalReport, precision_recall_f
from src.events.extract import extract_events
from src.training.trainer import train


def run_aem(
    doc_vectors: np.ndarray,
    vocabs: Sequence,
    gold: List[GoldEvent],
    config: TrainConfig,
    event_settings: EventSettings = EventSettings(),
    eval_settings: EvalSettings = EvalSettings(),
    schema: FieldSchema = EVENT_SCHEMA,
    progress: Optional[bool] = False,
) -> EvalReport:
    """Train, extract and score; `seconds` is the training wall-clock"""
    field_sizes = tuple(len(getattr(v, "terms", v)) for v in vocabs)
    G, _, trace = train(doc_vectors, config, np.random.default_rng(config.seed), field_sizes=field_sizes, progress=progress)
    table, _ = extract_events(G, vocabs, doc_vectors, event_settings, schema)
    matching = match_events(table, gold, eval_settings.MATCH_TOP_K, eval_settings.CORRECT_THRESHOLD)
    return precision_recall_f(matching, seconds=trace.total_seconds)


def run_kmeans(
    doc_vectors: np.ndarray,
    vocabs: Sequence,
    gold: List[GoldEvent],
    k: int,
    seed: int = 0,
    eval_settings: EvalSettings = EvalSettings(),
    schema: FieldSchema = EVENT_SCHEMA,
) -> EvalReport:
    terms = [getattr(v, "terms", v) for v in vocabs]
    start = time.perf_counter()
    result = kmeans_baseline(doc_vectors, k, seed, eval_settings.KMEANS_RESTARTS, terms=terms, labels=schema.labels)
    seconds = time.perf_counter() - start
    matching = match_events(result.events, gold, eval_settings.MATCH_TOP_K, eval_settings.CORRECT_THRESHOLD)
    return precision_recall_f(matching, seconds=seconds)
