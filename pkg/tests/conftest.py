import json

import numpy as np
import pytest

from src.config import TrainConfig
from src.corpus.records import DocumentRecord
from src.evaluation.synthetic import SyntheticSpec, generate_synthetic_corpus
from src.model import init_model


@pytest.fixture
def toy_corpus():
    """Three documents; entity field is (a,a,b), (a), (b,c)"""
    return [
        DocumentRecord(
            id="d1", entities=["a", "a", "b"], locations=["paris"], keywords=["fire", "fire"], dates=["2019-01-01"]
        ),
        DocumentRecord(id="d2", entities=["a"], locations=[], keywords=["fire", "flood"], dates=[]),
        DocumentRecord(
            id="d3", entities=["b", "c"], locations=["london"], keywords=["flood"], dates=["2019-01-02"]
        ),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_config():
    return TrainConfig(
        n_events=3,
        hidden_size=6,
        disc_hidden_size=5,
        batch_size=4,
        n_critic=2,
        max_g_steps=3,
        seed=7,
    )


@pytest.fixture
def tiny_model(tiny_config, rng):
    """Fresh G and D over field sizes (3, 2, 4, 2)"""
    return init_model(tiny_config, (3, 2, 4, 2), rng)


@pytest.fixture
def labelled_corpus():
    spec = SyntheticSpec(
        true_events=3,
        docs_per_event=8,
        field_vocab_sizes=(6, 6, 6, 6),
        terms_per_event=2,
        noise_rate=0.0,
        tokens_per_field=3,
        seed=3,
    )
    corpus, labels, truth = generate_synthetic_corpus(spec)
    return spec, corpus, labels, truth


@pytest.fixture
def corpus_file(tmp_path, labelled_corpus):
    _, corpus, _, _ = labelled_corpus
    path = tmp_path / "corpus.jsonl"
    with path.open("w", encoding="utf-8") as f:
        for doc in corpus:
            f.write(json.dumps(doc.model_dump()) + "\n")
    return path
