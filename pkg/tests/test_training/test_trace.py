import pytest

from src.training.trace import TRACE_COLUMNS, TraceRecord, TrainTrace, read_trace


def _record(i, loss=0.1):
    return TraceRecord(
        iteration=i, L_d=1.0 / 3.0 + loss, L_gp=0.25, L=3.0 + loss, gen_loss=-0.7, seconds=0.01 * i,
        d_updates=5 * i, g_updates=i,
    )


def test_write_read_round_trip(tmp_path):
    trace = TrainTrace()
    for i in range(1, 4):
        trace.append(_record(i))
    path = trace.write(tmp_path / "trace.tsv")
    frame = read_trace(path)
    assert list(frame.columns) == TRACE_COLUMNS
    assert frame["L_d"].tolist() == [r.L_d for r in trace.records]
    assert frame["d_updates"].tolist() == [5, 10, 15]


def test_iterations_must_increase():
    trace = TrainTrace()
    trace.append(_record(2))
    with pytest.raises(ValueError):
        trace.append(_record(2))


def test_summary_properties():
    trace = TrainTrace()
    assert trace.total_seconds == 0.0
    trace.append(_record(1))
    trace.append(_record(2))
    assert trace.generator_losses.tolist() == [-0.7, -0.7]
    assert trace.total_seconds == pytest.approx(0.02)
