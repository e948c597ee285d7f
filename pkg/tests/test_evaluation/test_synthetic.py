from collections import Counter

import numpy as np
import pytest
from pydantic import ValidationError

from src.corpus.records import EVENT_SCHEMA
from src.evaluation.matching import match_events
from src.evaluation.metrics import precision_recall_f
from src.evaluation.synthetic import SyntheticSpec, field_terms, generate_synthetic_corpus, gold_from_synthetic
from src.events.table import DecodedEvent, EventTable


def _one_hot_spec(**overrides):
    sizes = (3, 3, 3, 3)
    distributions = [[list(np.eye(3)[t]) for _ in range(4)] for t in range(3)]
    values = dict(
        true_events=3, docs_per_event=4, field_vocab_sizes=sizes, distributions=distributions,
        noise_rate=0.0, tokens_per_field=5,
    )
    values.update(overrides)
    return SyntheticSpec(**values)


def test_one_hot_events_repeat_one_term():
    corpus, labels, _ = generate_synthetic_corpus(_one_hot_spec())
    assert len(corpus) == 12
    for doc, label in zip(corpus, labels):
        t = int(label.split("_")[1]) - 1
        for k, tokens in enumerate(doc.fields):
            assert tokens == [f"{EVENT_SCHEMA.labels[k]}{t:03d}"] * 5


def test_fixed_seed_is_reproducible():
    spec = SyntheticSpec(true_events=2, docs_per_event=5, field_vocab_sizes=(8, 8, 8, 8), seed=11)
    a, _, truth_a = generate_synthetic_corpus(spec)
    b, _, truth_b = generate_synthetic_corpus(spec)
    assert a == b
    for fa, fb in zip(truth_a, truth_b):
        for x, y in zip(fa, fb):
            np.testing.assert_array_equal(x, y)


def test_token_frequencies_follow_ground_truth():
    spec = SyntheticSpec(
        true_events=1, docs_per_event=2000, field_vocab_sizes=(6, 6, 6, 6), terms_per_event=3,
        noise_rate=0.0, tokens_per_field=10, seed=4,
    )
    corpus, _, truth = generate_synthetic_corpus(spec)
    terms = field_terms(EVENT_SCHEMA, spec.field_vocab_sizes)
    counts = Counter(token for doc in corpus for token in doc.entities)
    total = sum(counts.values())
    for i, term in enumerate(terms[0]):
        assert abs(counts[term] / total - truth[0][0][i]) <= 0.02


def test_noise_stays_in_vocabulary():
    corpus, _, _ = generate_synthetic_corpus(_one_hot_spec(noise_rate=0.9))
    vocab = set(field_terms(EVENT_SCHEMA, (3, 3, 3, 3))[2])
    assert all(set(doc.keywords) <= vocab for doc in corpus)


def test_invalid_distributions():
    with pytest.raises(ValidationError):
        _one_hot_spec(distributions=[[[0.5, 0.4, 0.0]] * 4] * 3)
    with pytest.raises(ValidationError):
        _one_hot_spec(true_events=2)


def test_recovered_ground_truth_scores_perfectly():
    spec = SyntheticSpec(true_events=4, docs_per_event=2, field_vocab_sizes=(12, 12, 12, 12), seed=2)
    _, _, truth = generate_synthetic_corpus(spec)
    terms = tuple(tuple(t) for t in field_terms(EVENT_SCHEMA, spec.field_vocab_sizes))
    # an extractor that returned exactly the true distributions
    table = EventTable(
        events=tuple(DecodedEvent(t + 1, tuple(fields)) for t, fields in enumerate(truth)), terms=terms
    )
    report = precision_recall_f(match_events(table, gold_from_synthetic(spec, truth)))
    assert (report.precision, report.recall, report.f_measure) == (1.0, 1.0, 1.0)
