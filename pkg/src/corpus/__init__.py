"""
Pre-tagged document ingestion and per-field TF-IDF document representation.
"""
from src.corpus.records import (
    EVENT_SCHEMA,
    NEWS_SCHEMA,
    DocumentRecord,
    FieldSchema,
    corpus_statistics,
    filter_rare_events,
    get_schema,
    read_corpus,
    write_corpus,
)
from src.corpus.representation import CorpusMatrix, DocVector, represent_corpus, represent_document
from src.corpus.vocabulary import (
    FieldVocabulary,
    build_vocabularies,
    read_vocabularies,
    resolve_min_df,
    write_vocabularies,
)

__all__ = [
    "EVENT_SCHEMA",
    "NEWS_SCHEMA",
    "CorpusMatrix",
    "DocVector",
    "DocumentRecord",
    "FieldSchema",
    "FieldVocabulary",
    "build_vocabularies",
    "corpus_statistics",
    "filter_rare_events",
    "get_schema",
    "read_corpus",
    "read_vocabularies",
    "represent_corpus",
    "represent_document",
    "resolve_min_df",
    "write_corpus",
    "write_vocabularies",
]
