import numpy as np
import pytest

from src.errors import ConfigurationError
from src.model import check_field_sizes, init_model, load_model, save_model
from src.numerics.dirichlet import DirichletPrior, sample_dirichlet


def test_init_shapes(tiny_model, tiny_config):
    G, D = tiny_model
    assert G.field_sizes == (3, 2, 4, 2)
    assert G.output_size == 11
    assert D.input_size == 11
    assert D.hidden_size == tiny_config.disc_hidden_size
    assert len(G.hidden) == 1


def test_same_seed_same_initial_weights(tiny_config):
    G1, D1 = init_model(tiny_config, (3, 2, 4, 2), np.random.default_rng(5))
    G2, D2 = init_model(tiny_config, (3, 2, 4, 2), np.random.default_rng(5))
    for a, b in ((G1, G2), (D1, D2)):
        for name, t in a.state_dict().items():
            np.testing.assert_array_equal(t, b.state_dict()[name])


@pytest.mark.parametrize("sizes", [(1, 1, 1), (1, 1, 1, 0), (2, -1, 2, 2)])
def test_invalid_field_sizes(sizes):
    with pytest.raises(ConfigurationError):
        check_field_sizes(sizes)


def test_save_load_round_trip(tmp_path, tiny_model, tiny_config, rng):
    G, D = tiny_model
    G.forward(sample_dirichlet(DirichletPrior.symmetric(3), rng, 6), "training")
    path = save_model(tmp_path / "model.npz", G, D, tiny_config, {"vocabulary_digest": "abc"})
    G2, D2, config, meta = load_model(path)
    assert config == tiny_config
    assert meta["vocabulary_digest"] == "abc"
    assert meta["field_sizes"] == [3, 2, 4, 2]
    for a, b in ((G, G2), (D, D2)):
        for name, t in a.state_dict().items():
            np.testing.assert_array_equal(t, b.state_dict()[name])
    seeds = np.eye(3)
    np.testing.assert_array_equal(G.forward(seeds, "inference").concat, G2.forward(seeds, "inference").concat)


def test_load_missing_checkpoint(tmp_path):
    with pytest.raises(ConfigurationError):
        load_model(tmp_path / "nothing.npz")
