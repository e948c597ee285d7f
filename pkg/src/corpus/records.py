import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import structlog
from pydantic import BaseModel, ValidationError, field_validator

from src.errors import ConfigurationError, CorpusFormatError

logger = structlog.get_logger(__name__)

SLOTS: Tuple[str, str, str, str] = ("entities", "locations", "keywords", "dates")


@dataclass(frozen=True)
class FieldSchema:
    """Names the four role slots of an event quadruple.

    Slots are positional: a news corpus keeps organizations in the first slot
    and persons in the third, while the record type keeps the slot names.
    """

    name: str
    labels: Tuple[str, str, str, str]
    keys: Tuple[str, str, str, str]


EVENT_SCHEMA = FieldSchema(
    name="event",
    labels=("entity", "location", "keyword", "date"),
    keys=("entities", "locations", "keywords", "dates"),
)
NEWS_SCHEMA = FieldSchema(
    name="news",
    labels=("organization", "location", "person", "keyword"),
    keys=("organizations", "locations", "persons", "keywords"),
)
SCHEMAS: Dict[str, FieldSchema] = {s.name: s for s in (EVENT_SCHEMA, NEWS_SCHEMA)}


def get_schema(name: str) -> FieldSchema:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise ConfigurationError(f"Unknown field schema '{name}', expected one of {sorted(SCHEMAS)}")


class DocumentRecord(BaseModel):
    """A pre-tagged document: one token list per event slot plus an optional gold label"""

    model_config = {"frozen": True, "extra": "forbid"}

    id: str
    entities: List[str]
    locations: List[str]
    keywords: List[str]
    dates: List[str]
    gold_event: Optional[str] = None

    @field_validator("entities", "locations", "keywords", "dates")
    @classmethod
    def tokens_non_empty(cls, v):
        for token in v:
            if not token:
                raise ValueError("tokens must be non-empty strings")
        return v

    @property
    def fields(self) -> Tuple[List[str], List[str], List[str], List[str]]:
        return (self.entities, self.locations, self.keywords, self.dates)


def record_from_mapping(data: Dict[str, Any], schema: FieldSchema = EVENT_SCHEMA) -> DocumentRecord:
    """Build a record from a decoded line, mapping schema keys onto slots"""
    if not isinstance(data, dict):
        raise ValueError("record must be a JSON object")
    missing = [k for k in ("id",) + schema.keys if k not in data]
    if missing:
        raise ValueError(f"missing field(s): {', '.join(missing)}")
    allowed = {"id", "gold_event", *schema.keys}
    extra = sorted(set(data) - allowed)
    if extra:
        raise ValueError(f"unexpected field(s): {', '.join(extra)}")
    payload = {slot: data[key] for slot, key in zip(SLOTS, schema.keys)}
    payload["id"] = data["id"]
    payload["gold_event"] = data.get("gold_event")
    return DocumentRecord.model_validate(payload)


def record_to_mapping(record: DocumentRecord, schema: FieldSchema = EVENT_SCHEMA) -> Dict[str, Any]:
    data: Dict[str, Any] = {"id": record.id}
    for key, tokens in zip(schema.keys, record.fields):
        data[key] = list(tokens)
    if record.gold_event is not None:
        data["gold_event"] = record.gold_event
    return data


def parse_corpus_lines(lines: Iterable[str], schema: FieldSchema = EVENT_SCHEMA) -> List[DocumentRecord]:
    """Parse JSON-lines records; blank lines are skipped, errors carry the line number"""
    corpus: List[DocumentRecord] = []
    seen = set()
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusFormatError(f"invalid JSON ({e.msg})", line_number)
        try:
            record = record_from_mapping(data, schema)
        except ValidationError as e:
            raise CorpusFormatError(_first_error(e), line_number)
        except ValueError as e:
            raise CorpusFormatError(str(e), line_number)
        if record.id in seen:
            raise CorpusFormatError(f"duplicate document id '{record.id}'", line_number)
        seen.add(record.id)
        corpus.append(record)
    return corpus


def _first_error(e: ValidationError) -> str:
    err = e.errors()[0]
    loc = ".".join(str(p) for p in err["loc"])
    return f"{loc}: {err['msg']}"


def read_corpus(path: Path, schema: FieldSchema = EVENT_SCHEMA) -> List[DocumentRecord]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Corpus file not found: {path}")
    with path.open("r", encoding="utf-8") as f:
        corpus = parse_corpus_lines(f, schema)
    logger.info("Loaded corpus", path=str(path), documents=len(corpus), schema=schema.name)
    return corpus


def write_corpus(path: Path, corpus: Iterable[DocumentRecord], schema: FieldSchema = EVENT_SCHEMA) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        for record in corpus:
            f.write(json.dumps(record_to_mapping(record, schema), ensure_ascii=False, sort_keys=True) + "\n")


def filter_rare_events(corpus: List[DocumentRecord], min_docs: int) -> List[DocumentRecord]:
    """Drop documents whose gold event is mentioned by fewer than min_docs documents.

    Unlabelled documents are kept; min_docs <= 1 keeps everything.
    """
    if min_docs <= 1:
        return list(corpus)
    counts = Counter(doc.gold_event for doc in corpus if doc.gold_event is not None)
    kept = [doc for doc in corpus if doc.gold_event is None or counts[doc.gold_event] >= min_docs]
    dropped_events = sorted(e for e, c in counts.items() if c < min_docs)
    if dropped_events:
        logger.info(
            "Filtered rare events",
            min_docs=min_docs,
            dropped_events=len(dropped_events),
            dropped_documents=len(corpus) - len(kept),
        )
    return kept


def corpus_statistics(corpus: List[DocumentRecord], schema: FieldSchema = EVENT_SCHEMA) -> Dict[str, Any]:
    """Corpus-level counts per slot and the gold-event histogram"""
    per_field = {}
    for i, label in enumerate(schema.labels):
        tokens = Counter()
        empty = 0
        for doc in corpus:
            field = doc.fields[i]
            if not field:
                empty += 1
            tokens.update(field)
        per_field[label] = {
            "tokens": sum(tokens.values()),
            "distinct_terms": len(tokens),
            "empty_documents": empty,
            "most_common": [{"text": t, "count": c} for t, c in tokens.most_common(10)],
        }
    gold = Counter(doc.gold_event for doc in corpus if doc.gold_event is not None)
    return {
        "documents": len(corpus),
        "fields": per_field,
        "gold_events": dict(sorted(gold.items())),
        "unlabelled": sum(1 for doc in corpus if doc.gold_event is None),
    }
