from typing import Sequence, Tuple

import numpy as np
import structlog

from src.config import EventSettings
from src.corpus.records import EVENT_SCHEMA, FieldSchema
from src.events.assignment import Assignment, assign_documents, merge_duplicate_events
from src.events.table import EventTable, decode_events
from src.model.generator import GeneratorParams

logger = structlog.get_logger(__name__)


def extract_events(
    G: GeneratorParams,
    vocabs: Sequence,
    doc_vectors: np.ndarray,
    event_settings: EventSettings = EventSettings(),
    schema: FieldSchema = EVENT_SCHEMA,
) -> Tuple[EventTable, Assignment]:
    """Decode all events, assign documents, and optionally merge duplicates"""
    table = decode_events(G, vocabs=vocabs, schema=schema)
    assignment = assign_documents(doc_vectors, table)
    table = table.with_supports(assignment.supports(table))
    if event_settings.MERGE:
        table = merge_duplicate_events(
            table, event_settings.MERGE_THRESHOLD, doc_vectors=doc_vectors, top_k=event_settings.MERGE_TOP_K
        )
        assignment = assign_documents(doc_vectors, table)
    return table, assignment
