import json

import numpy as np
import pytest

from src.errors import ConfigurationError
from src.events.assignment import NULL_EVENT, Assignment
from src.events.io import (
    read_assignments,
    read_event_table,
    render_event_table,
    write_assignments,
    write_event_table,
)
from src.events.table import DecodedEvent, EventTable

TERMS = (("a", "b", "c"), ("x", "y"), ("k1", "k2"), ("d1",))


@pytest.fixture
def table(rng):
    events = tuple(
        DecodedEvent(i, tuple(rng.dirichlet(np.ones(len(t))) for t in TERMS), support=10 * i) for i in (1, 2)
    )
    return EventTable(events=events, terms=TERMS)


def test_event_table_round_trip(tmp_path, table):
    path = write_event_table(tmp_path / "events.json", table, top_n=2)
    loaded = read_event_table(path)
    assert loaded.terms == table.terms
    assert loaded.labels == table.labels
    assert [e.support for e in loaded.events] == [10, 20]
    assert loaded.concat_matrix().tobytes() == table.concat_matrix().tobytes()
    data = json.loads(path.read_text(encoding="utf-8"))
    assert all(len(e["top_words"]["entity"]) == 2 for e in data["events"])


def test_unknown_version(tmp_path):
    path = tmp_path / "events.json"
    path.write_text(json.dumps({"format_version": 7}), encoding="utf-8")
    with pytest.raises(ConfigurationError):
        read_event_table(path)


def test_missing_table(tmp_path):
    with pytest.raises(ConfigurationError):
        read_event_table(tmp_path / "events.json")


def test_assignments_round_trip(tmp_path):
    assignment = Assignment(np.array([2, NULL_EVENT, 1]), np.array([0.75, 0.0, 1.0 / 3.0]))
    path = write_assignments(tmp_path / "assignments.tsv", ["d1", "d2", "d3"], assignment)
    frame = read_assignments(path)
    assert frame["doc_id"].tolist() == ["d1", "d2", "d3"]
    assert frame["event"].iloc[0] == 2
    assert frame["event"].isna().tolist() == [False, True, False]
    assert frame["score"].tolist() == [0.75, 0.0, 1.0 / 3.0]


def test_render_lists_every_event(table):
    text = render_event_table(table, top_n=1)
    assert "Event 1 (support 10)" in text
    assert "Event 2 (support 20)" in text
    assert text.count("entity:") == 2
    assert "date:" in text
