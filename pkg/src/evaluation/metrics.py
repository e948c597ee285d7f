from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, Field

from src.evaluation.matching import Match, Matching
from src.utils.formatting import round_half_away


class EvalReport(BaseModel):
    precision: float = Field(ge=0.0, le=1.0)
    recall: float = Field(ge=0.0, le=1.0)
    f_measure: float = Field(ge=0.0, le=1.0)
    matching: List[Match] = []
    correct: List[bool] = []
    seconds: Optional[float] = None


def f_measure(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def precision_recall_f(
    matching: Matching, num_predicted: Optional[int] = None, num_gold: Optional[int] = None, seconds: float = None
) -> EvalReport:
    """P = correct / predicted, R = correctly matched gold / gold, F their harmonic mean"""
    num_predicted = matching.num_predicted if num_predicted is None else num_predicted
    num_gold = matching.num_gold if num_gold is None else num_gold
    precision = matching.num_correct / num_predicted if num_predicted > 0 else 0.0
    recall = matching.matched_gold / num_gold if num_gold > 0 else 0.0
    return EvalReport(
        precision=precision,
        recall=recall,
        f_measure=f_measure(precision, recall),
        matching=list(matching.matches),
        correct=list(matching.correct),
        seconds=seconds,
    )


def report_frame(reports: Dict[str, EvalReport]) -> pd.DataFrame:
    """Method, P, R, F in percent with one decimal (rounded half away from zero)"""
    rows = [
        {
            "method": method,
            "P": round_half_away(100.0 * r.precision, 1),
            "R": round_half_away(100.0 * r.recall, 1),
            "F": round_half_away(100.0 * r.f_measure, 1),
        }
        for method, r in reports.items()
    ]
    return pd.DataFrame(rows, columns=["method", "P", "R", "F"])


def write_report(path: Path, reports: Dict[str, EvalReport]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report_frame(reports).to_csv(path, sep="\t", index=False, float_format="%.1f")
    return path
