import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Sequence, Tuple

from src.corpus.records import EVENT_SCHEMA, DocumentRecord, FieldSchema
from src.errors import ConfigurationError

TermSets = Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str], FrozenSet[str]]


@dataclass(frozen=True)
class GoldEvent:
    """Reference term set per field for one true event"""

    name: str
    terms: TermSets


def most_common_terms(counts: Counter, k: int) -> List[str]:
    return [t for t, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]]


def gold_from_corpus(corpus: Sequence[DocumentRecord], top_k: int = 10) -> List[GoldEvent]:
    """Reference sets from labelled documents: the k most frequent terms of each field per event"""
    counts: Dict[str, List[Counter]] = defaultdict(lambda: [Counter() for _ in range(4)])
    for doc in corpus:
        if doc.gold_event is None:
            continue
        for slot, tokens in enumerate(doc.fields):
            counts[doc.gold_event][slot].update(tokens)
    if not counts:
        raise ConfigurationError("Corpus has no labelled documents to derive gold events from")
    return [
        GoldEvent(name, tuple(frozenset(most_common_terms(c, top_k)) for c in per_field))
        for name, per_field in sorted(counts.items())
    ]


def write_gold(path: Path, gold: Sequence[GoldEvent], schema: FieldSchema = EVENT_SCHEMA) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {
        "labels": list(schema.labels),
        "events": {
            g.name: {label: sorted(terms) for label, terms in zip(schema.labels, g.terms)} for g in gold
        },
    }
    with path.open("w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=True)
        f.write("\n")
    return path


def read_gold(path: Path) -> List[GoldEvent]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Gold file not found: {path}")
    with path.open("r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Gold file {path} is not valid JSON: {e.msg}")
    labels = data.get("labels", list(EVENT_SCHEMA.labels))
    events = data.get("events") or {}
    if not events:
        raise ConfigurationError(f"Gold file {path} lists no events")
    return [
        GoldEvent(name, tuple(frozenset(fields.get(label, [])) for label in labels))
        for name, fields in sorted(events.items())
    ]
