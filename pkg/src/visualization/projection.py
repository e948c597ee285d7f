from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
import structlog  # noqa: E402
from sklearn.decomposition import PCA  # noqa: E402

from src.errors import ProjectionError  # noqa: E402
from src.model.discriminator import DiscriminatorParams  # noqa: E402
from src.utils.formatting import fmt_float  # noqa: E402

logger = structlog.get_logger(__name__)


def discriminative_features(D: DiscriminatorParams, doc_vectors: np.ndarray, batch_size: int = 512) -> np.ndarray:
    """Feature-layer activations for every document, in row order"""
    docs = np.atleast_2d(np.asarray(doc_vectors, dtype=np.float64))
    chunks = [D.forward(docs[i:i + batch_size])[0] for i in range(0, docs.shape[0], batch_size)]
    return np.vstack(chunks) if chunks else np.zeros((0, D.hidden_size))


def project_2d(features: np.ndarray) -> np.ndarray:
    """Coordinates on the two leading principal components (exact SVD)"""
    X = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if X.shape[0] < 2:
        raise ProjectionError(f"Projection needs at least 2 documents, got {X.shape[0]}")
    n_components = min(2, X.shape[0], X.shape[1])
    coords = PCA(n_components=n_components, svd_solver="full").fit_transform(X)
    if n_components < 2:
        coords = np.hstack([coords, np.zeros((X.shape[0], 2 - n_components))])
    return coords


def write_matrix(path: Path, ids: Sequence[str], matrix: np.ndarray, prefix: str) -> Path:
    """Tab-separated doc_id + one column per dimension, 17 significant digits"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        {f"{prefix}{j}": [fmt_float(v) for v in matrix[:, j]] for j in range(matrix.shape[1])}
    )
    frame.insert(0, "doc_id", list(ids))
    frame.to_csv(path, sep="\t", index=False)
    return path


def plot_projection(
    path: Path, coords: np.ndarray, labels: Optional[Sequence] = None, title: str = "Discriminative features"
) -> Path:
    """Scatter of the 2-D projection, colored by label, saved as SVG"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 6))
    if labels is None:
        ax.scatter(coords[:, 0], coords[:, 1], s=8)
    else:
        labels = np.asarray([str(l) for l in labels])
        for i, label in enumerate(sorted(set(labels))):
            mask = labels == label
            ax.scatter(coords[mask, 0], coords[mask, 1], s=8, color=plt.cm.tab20(i % 20), label=label)
        if len(set(labels)) <= 20:
            ax.legend(fontsize="x-small", markerscale=2, loc="best")
    ax.set_title(title)
    ax.set_xlabel("PC 1")
    ax.set_ylabel("PC 2")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    logger.info("Projection plotted", path=str(path), points=int(coords.shape[0]))
    return path
