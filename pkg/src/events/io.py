import json
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from src.errors import ConfigurationError
from src.events.assignment import NULL_EVENT, Assignment
from src.events.table import DecodedEvent, EventTable
from src.utils.formatting import fmt_float

EVENTS_FORMAT_VERSION = 1


def event_table_to_dict(table: EventTable, top_n: int = 5) -> dict:
    tops = table.top_words(top_n)
    return {
        "format_version": EVENTS_FORMAT_VERSION,
        "labels": list(table.labels),
        "terms": {label: list(terms) for label, terms in zip(table.labels, table.terms)},
        "events": [
            {
                "index": event.index,
                "support": event.support,
                "top_words": {label: words for label, words in zip(table.labels, top)},
                "distributions": {
                    label: [float(p) for p in dist] for label, dist in zip(table.labels, event.distributions)
                },
            }
            for event, top in zip(table.events, tops)
        ],
    }


def event_table_from_dict(data: dict) -> EventTable:
    if data.get("format_version") != EVENTS_FORMAT_VERSION:
        raise ConfigurationError(f"Unsupported event table version {data.get('format_version')}")
    labels = tuple(data["labels"])
    terms = tuple(tuple(data["terms"][label]) for label in labels)
    events = tuple(
        DecodedEvent(
            index=int(e["index"]),
            distributions=tuple(np.asarray(e["distributions"][label], dtype=np.float64) for label in labels),
            support=int(e.get("support", 0)),
        )
        for e in data["events"]
    )
    return EventTable(events=events, terms=terms, labels=labels)


def write_event_table(path: Path, table: EventTable, top_n: int = 5) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(event_table_to_dict(table, top_n), f, indent=2, ensure_ascii=False)
        f.write("\n")
    return path


def read_event_table(path: Path) -> EventTable:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Event table not found: {path}")
    with path.open("r", encoding="utf-8") as f:
        try:
            return event_table_from_dict(json.load(f))
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Malformed event table {path}: {e}")


def assignment_frame(doc_ids: Sequence[str], assignment: Assignment) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "doc_id": list(doc_ids),
            "event": [None if e == NULL_EVENT else int(e) for e in assignment.event_index],
            "score": [fmt_float(s) for s in assignment.score],
        }
    )


def write_assignments(path: Path, doc_ids: Sequence[str], assignment: Assignment) -> Path:
    """Tab-separated rows: doc_id, event (empty for a null assignment), score"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    assignment_frame(doc_ids, assignment).to_csv(path, sep="\t", index=False)
    return path


def read_assignments(path: Path) -> pd.DataFrame:
    frame = pd.read_csv(path, sep="\t", dtype={"doc_id": str}, float_precision="round_trip")
    frame["event"] = frame["event"].astype("Int64")
    return frame


def render_event_table(table: EventTable, top_n: int = 5) -> str:
    """Human-readable block per event: one line of representative terms per field"""
    width = max(len(label) for label in table.labels) + 1
    lines = []
    for event, top in zip(table.events, table.top_words(top_n)):
        lines.append(f"Event {event.index} (support {event.support})")
        for label, words in zip(table.labels, top):
            lines.append(f"  {(label + ':').ljust(width)} {', '.join(words) if words else '-'}")
        lines.append("")
    return "\n".join(lines)
