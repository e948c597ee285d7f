import json

import pytest

from src.corpus.records import (
    NEWS_SCHEMA,
    DocumentRecord,
    corpus_statistics,
    filter_rare_events,
    get_schema,
    parse_corpus_lines,
    read_corpus,
    write_corpus,
)
from src.errors import ConfigurationError, CorpusFormatError


def _line(**fields):
    record = {"id": "x", "entities": [], "locations": [], "keywords": [], "dates": []}
    record.update(fields)
    return json.dumps(record)


def test_parse_skips_blank_lines():
    corpus = parse_corpus_lines([_line(id="a", entities=["obama"]), "", "   ", _line(id="b")])
    assert [doc.id for doc in corpus] == ["a", "b"]
    assert corpus[0].entities == ["obama"]


def test_missing_key_reports_line_number():
    lines = [_line(id="a"), json.dumps({"id": "b", "entities": [], "locations": [], "keywords": []})]
    with pytest.raises(CorpusFormatError) as excinfo:
        parse_corpus_lines(lines)
    assert excinfo.value.line_number == 2
    assert "dates" in str(excinfo.value)


def test_invalid_json_reports_line_number():
    with pytest.raises(CorpusFormatError) as excinfo:
        parse_corpus_lines([_line(id="a"), _line(id="b"), "{not json"])
    assert excinfo.value.line_number == 3


def test_empty_token_rejected():
    with pytest.raises(CorpusFormatError) as excinfo:
        parse_corpus_lines([_line(id="a", keywords=["fire", ""])])
    assert excinfo.value.line_number == 1


def test_duplicate_id_rejected():
    with pytest.raises(CorpusFormatError, match="duplicate"):
        parse_corpus_lines([_line(id="a"), _line(id="a")])


def test_unexpected_field_rejected():
    with pytest.raises(CorpusFormatError, match="unexpected"):
        parse_corpus_lines([_line(id="a", people=["x"])])


def test_news_schema_maps_slots():
    line = json.dumps(
        {"id": "n1", "organizations": ["un"], "locations": ["geneva"], "persons": ["guterres"], "keywords": ["talks"]}
    )
    (doc,) = parse_corpus_lines([line], NEWS_SCHEMA)
    assert doc.fields == (["un"], ["geneva"], ["guterres"], ["talks"])


def test_unknown_schema():
    with pytest.raises(ConfigurationError):
        get_schema("tweets")


def test_write_read_round_trip(tmp_path, toy_corpus):
    path = tmp_path / "corpus.jsonl"
    write_corpus(path, toy_corpus)
    assert read_corpus(path) == toy_corpus


def test_missing_corpus_file(tmp_path):
    with pytest.raises(ConfigurationError):
        read_corpus(tmp_path / "absent.jsonl")


def test_filter_rare_events_keeps_unlabelled():
    corpus = [
        DocumentRecord(id="1", entities=[], locations=[], keywords=[], dates=[], gold_event="big"),
        DocumentRecord(id="2", entities=[], locations=[], keywords=[], dates=[], gold_event="big"),
        DocumentRecord(id="3", entities=[], locations=[], keywords=[], dates=[], gold_event="rare"),
        DocumentRecord(id="4", entities=[], locations=[], keywords=[], dates=[]),
    ]
    kept = filter_rare_events(corpus, min_docs=2)
    assert [doc.id for doc in kept] == ["1", "2", "4"]
    assert filter_rare_events(corpus, min_docs=0) == corpus


def test_corpus_statistics(toy_corpus):
    stats = corpus_statistics(toy_corpus)
    assert stats["documents"] == 3
    assert stats["fields"]["entity"]["tokens"] == 6
    assert stats["fields"]["entity"]["distinct_terms"] == 3
    assert stats["fields"]["location"]["empty_documents"] == 1
    assert stats["unlabelled"] == 3
