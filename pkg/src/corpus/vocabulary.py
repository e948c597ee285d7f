from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from sklearn.feature_extraction.text import CountVectorizer

from src.config import settings
from src.corpus.records import EVENT_SCHEMA, DocumentRecord, FieldSchema
from src.errors import ConfigurationError, CorpusFormatError
from src.utils.formatting import fmt_float

logger = structlog.get_logger(__name__)


def _identity(tokens):
    return tokens


def field_vectorizer(vocabulary: Optional[Sequence[str]] = None, min_df: int = 1) -> CountVectorizer:
    """Count vectorizer over already-tokenized field lists"""
    return CountVectorizer(
        analyzer=_identity,
        lowercase=False,
        min_df=min_df,
        vocabulary=list(vocabulary) if vocabulary is not None else None,
    )


@dataclass(frozen=True, eq=False)
class FieldVocabulary:
    """Terms of one pseudo-corpus with their document frequencies and idf.

    Term order is lexicographic; index in `terms` is the vector dimension.
    """

    terms: Tuple[str, ...]
    document_frequency: np.ndarray
    corpus_size: int
    idf: np.ndarray
    _index: Dict[str, int] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def index_of(self, term: str) -> Optional[int]:
        return self._index.get(term)

    @property
    def is_empty(self) -> bool:
        return len(self.terms) == 0


def resolve_min_df(n_documents: int, min_df: Optional[int] = None) -> int:
    """Explicit min_df wins; otherwise 1 for small corpora and 3 for large ones"""
    if min_df is not None:
        return min_df
    if settings.corpus.MIN_DF is not None:
        return settings.corpus.MIN_DF
    if n_documents > settings.corpus.LARGE_CORPUS_THRESHOLD:
        return settings.corpus.LARGE_CORPUS_MIN_DF
    return settings.corpus.SMALL_CORPUS_MIN_DF


def build_field_vocabulary(field_tokens: List[List[str]], min_df: int) -> FieldVocabulary:
    """Vocabulary of one pseudo-corpus.

    Document frequency is counted on the raw pseudo-corpus, terms below min_df
    are pruned afterwards. |C| is the number of documents of the whole corpus,
    including those whose field is empty.
    """
    n_docs = len(field_tokens)
    vectorizer = field_vectorizer()
    try:
        counts = vectorizer.fit_transform(field_tokens)
    except ValueError:
        # every document has an empty field
        return FieldVocabulary((), np.zeros(0, dtype=np.int64), n_docs, np.zeros(0))
    terms = vectorizer.get_feature_names_out()
    df = np.asarray((counts > 0).sum(axis=0)).ravel().astype(np.int64)
    keep = df >= min_df
    terms = tuple(str(t) for t in terms[keep])
    df = df[keep]
    idf = np.log(n_docs / df) if len(df) else np.zeros(0)
    return FieldVocabulary(terms, df, n_docs, idf)


def build_vocabularies(
    corpus: List[DocumentRecord], min_df: int = 1, schema: FieldSchema = EVENT_SCHEMA
) -> Tuple[FieldVocabulary, FieldVocabulary, FieldVocabulary, FieldVocabulary]:
    """One vocabulary per event slot, in entity, location, keyword, date order"""
    if not corpus:
        raise ConfigurationError("Cannot build vocabularies from an empty corpus")
    if min_df < 1:
        raise ConfigurationError(f"min_df must be >= 1, got {min_df}")

    vocabs = []
    for slot, label in enumerate(schema.labels):
        vocab = build_field_vocabulary([list(doc.fields[slot]) for doc in corpus], min_df)
        if vocab.is_empty:
            logger.warning("Empty field vocabulary", field=label, min_df=min_df)
        else:
            logger.info("Vocabulary built", field=label, size=len(vocab), min_df=min_df)
        vocabs.append(vocab)
    return tuple(vocabs)


def write_vocabularies(directory: Path, vocabs: Sequence[FieldVocabulary], schema: FieldSchema = EVENT_SCHEMA) -> List[Path]:
    """Write one `vocab_<label>.tsv` sidecar per field: header `#corpus_size`, then term/df/idf rows"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for label, vocab in zip(schema.labels, vocabs):
        path = directory / f"vocab_{label}.tsv"
        with path.open("w", encoding="utf-8") as f:
            f.write(f"#corpus_size\t{vocab.corpus_size}\n")
            for term, df, idf in zip(vocab.terms, vocab.document_frequency, vocab.idf):
                f.write(f"{term}\t{int(df)}\t{fmt_float(idf)}\n")
        paths.append(path)
    return paths


def read_vocabularies(directory: Path, schema: FieldSchema = EVENT_SCHEMA) -> Tuple[FieldVocabulary, ...]:
    directory = Path(directory)
    vocabs = []
    for label in schema.labels:
        path = directory / f"vocab_{label}.tsv"
        if not path.exists():
            raise ConfigurationError(f"Missing vocabulary sidecar {path}")
        terms, dfs, idfs = [], [], []
        corpus_size = None
        with path.open("r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if parts[0] == "#corpus_size":
                    corpus_size = int(parts[1])
                    continue
                if len(parts) != 3:
                    raise CorpusFormatError(f"{path.name}: expected term, df, idf", line_number)
                terms.append(parts[0])
                dfs.append(int(parts[1]))
                idfs.append(float(parts[2]))
        if corpus_size is None:
            raise CorpusFormatError(f"{path.name}: missing #corpus_size header", 1)
        vocabs.append(
            FieldVocabulary(tuple(terms), np.asarray(dfs, dtype=np.int64), corpus_size, np.asarray(idfs, dtype=np.float64))
        )
    return tuple(vocabs)
