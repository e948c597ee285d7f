import pytest

from src.evaluation.matching import Match, Matching
from src.evaluation.metrics import EvalReport, f_measure, precision_recall_f, report_frame, write_report
from src.utils.formatting import round_half_away


@pytest.mark.parametrize("p, r, expected", [(0.857, 0.9, 87.8), (0.84, 0.55, 66.5), (1.0, 1.0, 100.0), (0.0, 0.0, 0.0)])
def test_f_measure_reported_values(p, r, expected):
    assert round_half_away(100 * f_measure(p, r), 1) == expected


def test_f_measure_bounds():
    for p in (0.1, 0.4, 0.9):
        for r in (0.2, 0.5, 1.0):
            f = f_measure(p, r)
            assert min(p, r) <= f <= (p + r) / 2
            assert f == pytest.approx(f_measure(r, p))


def test_round_half_away_from_zero():
    assert round_half_away(0.25, 1) == 0.3
    assert round_half_away(-0.25, 1) == -0.3
    assert round_half_away(87.84, 1) == 87.8


def _matching(correct, num_gold):
    matches = [Match(i, f"g{i}", 0.5 if ok else 0.1, ok) for i, ok in enumerate(correct)]
    return Matching(matches, len(correct), num_gold, 0.3, list(correct))


def test_precision_and_recall():
    report = precision_recall_f(_matching([True, True, False, False], num_gold=3))
    assert report.precision == 0.5
    assert report.recall == pytest.approx(2 / 3)
    assert report.f_measure == pytest.approx(f_measure(0.5, 2 / 3))


def test_no_predictions():
    report = precision_recall_f(Matching([], 0, 3, 0.3, []))
    assert (report.precision, report.recall, report.f_measure) == (0.0, 0.0, 0.0)


def test_report_table(tmp_path):
    reports = {
        "K-means": EvalReport(precision=0.84, recall=0.55, f_measure=f_measure(0.84, 0.55)),
        "AEM": EvalReport(precision=0.857, recall=0.9, f_measure=f_measure(0.857, 0.9)),
    }
    frame = report_frame(reports)
    assert frame["method"].tolist() == ["K-means", "AEM"]
    assert frame["F"].tolist() == [66.5, 87.8]
    path = write_report(tmp_path / "report.tsv", reports)
    lines = path.read_text().splitlines()
    assert lines[0].split("\t") == ["method", "P", "R", "F"]
    assert lines[2].split("\t") == ["AEM", "85.7", "90.0", "87.8"]
