import time
from typing import Callable, Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from src.config import TrainConfig
from src.evaluation.kmeans import kmeans_baseline
from src.training.trainer import train

logger = structlog.get_logger(__name__)


def timing_harness(methods: Mapping[str, Callable[[], object]], repeats: int = 1) -> pd.DataFrame:
    """Wall-clock of each method on already-loaded data; one row per run"""
    rows = []
    for name, run in methods.items():
        for repeat in range(repeats):
            start = time.perf_counter()
            run()
            seconds = time.perf_counter() - start
            rows.append({"method": name, "repeat": repeat, "seconds": seconds})
            logger.info("Timed method", method=name, repeat=repeat, seconds=round(seconds, 4))
    return pd.DataFrame(rows, columns=["method", "repeat", "seconds"])


def scaling_methods(
    doc_vectors: np.ndarray,
    field_sizes: Tuple[int, int, int, int],
    base_config: TrainConfig,
    n_events: Iterable[int],
    kmeans_k: int = None,
    kmeans_restarts: int = 10,
) -> Dict[str, Callable[[], object]]:
    """K-means plus one AEM training run per event count, all on the same matrix"""
    n_events = list(n_events)
    k = kmeans_k or (n_events[0] if n_events else base_config.n_events)
    methods: Dict[str, Callable[[], object]] = {
        "kmeans": lambda: kmeans_baseline(doc_vectors, k, base_config.seed, kmeans_restarts),
    }
    for e in n_events:
        config = base_config.model_copy(update={"n_events": e, "dirichlet_alpha": None})
        methods[f"aem_E{e}"] = _trainer(doc_vectors, field_sizes, config)
    return methods


def _trainer(doc_vectors: np.ndarray, field_sizes: Sequence[int], config: TrainConfig) -> Callable[[], object]:
    def run():
        return train(doc_vectors, config, np.random.default_rng(config.seed), field_sizes=field_sizes, progress=False)

    return run


def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    return frame.groupby("method", sort=False)["seconds"].agg(["median", "min", "max"]).reset_index()
