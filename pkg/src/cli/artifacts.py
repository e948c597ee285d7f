"""On-disk layout of a prepared corpus directory.

    corpus.jsonl            normalized copy of the input records
    vocab_<label>.tsv       one vocabulary sidecar per field
    doc_vectors.npz         N x V matrix, ids and field sizes in the metadata
    statistics.json         corpus statistics
"""
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

from src.corpus.records import DocumentRecord, FieldSchema, get_schema, read_corpus, write_corpus
from src.corpus.representation import CorpusMatrix
from src.corpus.vocabulary import FieldVocabulary, read_vocabularies, write_vocabularies
from src.errors import ConfigurationError
from src.numerics.checkpoint import load_tensors, save_tensors

CORPUS_FILE = "corpus.jsonl"
MATRIX_FILE = "doc_vectors.npz"
STATISTICS_FILE = "statistics.json"


@dataclass(frozen=True, eq=False)
class PreparedCorpus:
    directory: Path
    schema: FieldSchema
    corpus: List[DocumentRecord]
    vocabs: Tuple[FieldVocabulary, ...]
    matrix: CorpusMatrix
    vocabulary_digest: str
    min_df: int


def vocabulary_digest(directory: Path, schema: FieldSchema) -> str:
    h = hashlib.sha256()
    for label in schema.labels:
        h.update((Path(directory) / f"vocab_{label}.tsv").read_bytes())
    return h.hexdigest()


def save_prepared(
    directory: Path,
    corpus: Sequence[DocumentRecord],
    vocabs: Sequence[FieldVocabulary],
    matrix: CorpusMatrix,
    schema: FieldSchema,
    min_df: int,
    statistics: dict,
) -> dict:
    """Write every prepare artifact; returns name -> path"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {}
    paths["corpus"] = directory / CORPUS_FILE
    write_corpus(paths["corpus"], corpus, schema)
    for label, path in zip(schema.labels, write_vocabularies(directory, vocabs, schema)):
        paths[f"vocab_{label}"] = path
    paths["doc_vectors"] = save_tensors(
        directory / MATRIX_FILE,
        {"matrix": matrix.matrix},
        {
            "ids": list(matrix.ids),
            "field_sizes": list(matrix.field_sizes),
            "schema": schema.name,
            "min_df": min_df,
            "vocabulary_digest": vocabulary_digest(directory, schema),
        },
    )
    paths["statistics"] = directory / STATISTICS_FILE
    with paths["statistics"].open("w", encoding="utf-8") as f:
        json.dump(statistics, f, indent=2, ensure_ascii=False, sort_keys=True)
        f.write("\n")
    return paths


def load_prepared(directory: Path) -> PreparedCorpus:
    directory = Path(directory)
    if not (directory / MATRIX_FILE).exists():
        raise ConfigurationError(f"{directory} is not a prepared corpus directory (run `aem prepare` first)")
    tensors, meta = load_tensors(directory / MATRIX_FILE)
    schema = get_schema(meta["schema"])
    vocabs = read_vocabularies(directory, schema)
    matrix = CorpusMatrix(tuple(meta["ids"]), tensors["matrix"], tuple(meta["field_sizes"]))
    digest = vocabulary_digest(directory, schema)
    if digest != meta["vocabulary_digest"]:
        raise ConfigurationError(f"Vocabulary sidecars in {directory} changed after the matrix was written")
    corpus = read_corpus(directory / CORPUS_FILE, schema)
    return PreparedCorpus(directory, schema, corpus, vocabs, matrix, digest, int(meta["min_df"]))
