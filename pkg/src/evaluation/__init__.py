"""
Scoring extracted events against gold sets, the K-means baseline, synthetic
corpora with known ground truth, timing and parameter sweeps.
"""
from src.evaluation.gold import GoldEvent, gold_from_corpus, read_gold, write_gold
from src.evaluation.kmeans import KMeansResult, kmeans_baseline
from src.evaluation.matching import Match, Matching, event_similarity, match_events
from src.evaluation.metrics import EvalReport, f_measure, precision_recall_f, report_frame, write_report
from src.evaluation.pipeline import run_aem, run_kmeans
from src.evaluation.sweep import DEFAULT_GRID, parameter_sweep
from src.evaluation.synthetic import SyntheticSpec, generate_synthetic_corpus, gold_from_synthetic
from src.evaluation.timing import scaling_methods, summarize, timing_harness

__all__ = [
    "DEFAULT_GRID",
    "EvalReport",
    "GoldEvent",
    "KMeansResult",
    "Match",
    "Matching",
    "SyntheticSpec",
    "event_similarity",
    "f_measure",
    "generate_synthetic_corpus",
    "gold_from_corpus",
    "gold_from_synthetic",
    "kmeans_baseline",
    "match_events",
    "parameter_sweep",
    "precision_recall_f",
    "read_gold",
    "report_frame",
    "run_aem",
    "run_kmeans",
    "scaling_methods",
    "summarize",
    "timing_harness",
    "write_gold",
    "write_report",
]
