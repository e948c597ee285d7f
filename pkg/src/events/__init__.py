"""
Event decoding from one-hot seeds, document assignment and duplicate merging.
"""
from src.events.assignment import NULL_EVENT, Assignment, assign_documents, jaccard, merge_duplicate_events
from src.events.io import (
    read_assignments,
    read_event_table,
    render_event_table,
    write_assignments,
    write_event_table,
)
from src.events.table import DecodedEvent, EventSeed, EventTable, decode_events, top_words

__all__ = [
    "NULL_EVENT",
    "Assignment",
    "DecodedEvent",
    "EventSeed",
    "EventTable",
    "assign_documents",
    "decode_events",
    "jaccard",
    "merge_duplicate_events",
    "read_assignments",
    "read_event_table",
    "render_event_table",
    "top_words",
    "write_assignments",
    "write_event_table",
]
