import numpy as np
import pandas as pd
import pytest

from src.errors import ProjectionError
from src.visualization.projection import discriminative_features, plot_projection, project_2d, write_matrix


def _pairwise(X):
    return np.linalg.norm(X[:, None, :] - X[None, :, :], axis=-1)


def test_planar_points_keep_their_distances(rng):
    plane = rng.normal(size=(12, 2))
    basis, _ = np.linalg.qr(rng.normal(size=(6, 2)))
    features = plane @ basis.T + 3.0
    np.testing.assert_allclose(_pairwise(project_2d(features)), _pairwise(plane), atol=1e-9)


def test_projection_needs_two_documents():
    with pytest.raises(ProjectionError):
        project_2d(np.ones((1, 4)))


def test_single_feature_is_padded():
    coords = project_2d(np.array([[0.0], [1.0], [3.0]]))
    assert coords.shape == (3, 2)
    np.testing.assert_array_equal(coords[:, 1], 0.0)


def test_identical_documents_get_identical_features(tiny_model):
    _, D = tiny_model
    doc = np.concatenate([np.full(3, 1 / 3), [1.0, 0.0], np.full(4, 0.25), [0.5, 0.5]])
    features = discriminative_features(D, np.vstack([doc, doc, np.roll(doc, 1)]), batch_size=2)
    assert features.shape == (3, D.hidden_size)
    np.testing.assert_array_equal(features[0], features[1])


def test_write_matrix(tmp_path):
    path = write_matrix(tmp_path / "features.tsv", ["d1", "d2"], np.array([[0.1, 2.0], [1 / 3, -1.0]]), "f")
    frame = pd.read_csv(path, sep="\t", float_precision="round_trip")
    assert list(frame.columns) == ["doc_id", "f0", "f1"]
    assert frame["f0"].iloc[1] == 1 / 3


def test_plot_projection_writes_svg(tmp_path, rng):
    coords = rng.normal(size=(10, 2))
    path = plot_projection(tmp_path / "plots" / "scatter.svg", coords, labels=["a"] * 5 + ["b"] * 5)
    assert path.read_text().lstrip().startswith("<?xml")
