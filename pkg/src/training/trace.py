from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from src.utils.formatting import fmt_float

TRACE_COLUMNS = [
    "iteration",
    "L_d",
    "L_gp",
    "L",
    "gen_loss",
    "seconds",
    "d_updates",
    "g_updates",
]


@dataclass
class TraceRecord:
    """One generator iteration; discriminator columns are from the last D step of the round"""

    iteration: int
    L_d: float
    L_gp: float
    L: float
    gen_loss: float
    seconds: float
    d_updates: int
    g_updates: int


@dataclass
class TrainTrace:
    records: List[TraceRecord] = field(default_factory=list)
    # every discriminator step, in order: (L_d, L_gp, L)
    d_losses: List[tuple] = field(default_factory=list)
    generator_snapshot: Optional[str] = None
    discriminator_snapshot: Optional[str] = None
    converged: bool = False
    stop_reason: str = ""
    # periodic checkpoints written during the run, oldest first
    checkpoints: List[Path] = field(default_factory=list)

    def append(self, record: TraceRecord) -> None:
        if self.records and record.iteration <= self.records[-1].iteration:
            raise ValueError("Trace iterations must increase")
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def generator_losses(self) -> np.ndarray:
        return np.array([r.gen_loss for r in self.records])

    @property
    def total_seconds(self) -> float:
        return self.records[-1].seconds if self.records else 0.0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.records], columns=TRACE_COLUMNS)

    def write(self, path: Path) -> Path:
        """Tab-separated log with 17 significant digits"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = self.to_frame()
        for column in ("L_d", "L_gp", "L", "gen_loss", "seconds"):
            frame[column] = frame[column].map(fmt_float)
        frame.to_csv(path, sep="\t", index=False)
        return path


def read_trace(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, sep="\t", float_precision="round_trip")
