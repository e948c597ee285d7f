from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import structlog

from src.config import EvalSettings, EventSettings, TrainConfig
from src.corpus.records import EVENT_SCHEMA, FieldSchema
from src.errors import ConfigurationError
from src.evaluation.gold import GoldEvent
from src.evaluation.pipeline import run_aem

logger = structlog.get_logger(__name__)

DEFAULT_GRID: Dict[str, List[int]] = {
    "n_critic": [5, 7, 10],
    "hidden_size": [100, 150, 200],
    "depth": [3, 4, 5],
}


def parameter_sweep(
    doc_vectors: np.ndarray,
    vocabs: Sequence,
    gold: List[GoldEvent],
    base_config: TrainConfig,
    grid: Optional[Dict[str, List]] = None,
    event_settings: EventSettings = EventSettings(),
    eval_settings: EvalSettings = EvalSettings(),
    schema: FieldSchema = EVENT_SCHEMA,
) -> pd.DataFrame:
    """Vary one hyperparameter at a time, others at `base_config`, and score each run"""
    grid = grid or DEFAULT_GRID
    unknown = sorted(set(grid) - set(TrainConfig.model_fields))
    if unknown:
        raise ConfigurationError(f"Unknown sweep parameters: {unknown}")
    rows = []
    for parameter, values in grid.items():
        for value in values:
            config = TrainConfig.model_validate({**base_config.model_dump(), parameter: value})
            report = run_aem(doc_vectors, vocabs, gold, config, event_settings, eval_settings, schema)
            logger.info("Sweep point", parameter=parameter, value=value, f_measure=round(report.f_measure, 4))
            rows.append(
                {
                    "parameter": parameter,
                    "value": value,
                    "P": report.precision,
                    "R": report.recall,
                    "F": report.f_measure,
                    "seconds": report.seconds,
                }
            )
    return pd.DataFrame(rows, columns=["parameter", "value", "P", "R", "F", "seconds"])
