import argparse
import json

import numpy as np
import pytest

from src.cli.artifacts import MATRIX_FILE, load_prepared
from src.cli.main import build_parser, check_vocabulary, main, resolve_train_config
from src.errors import ConfigurationError, VocabularyMismatchError
from src.training.trace import read_trace
from src.utils.manifest import LOCK_NAME, read_manifest

TINY_TRAIN = [
    "--n-events", "3", "--hidden", "4", "--disc-hidden", "4", "--batch-size", "4",
    "--n-critic", "2", "--max-g-steps", "2", "--seed", "5", "--quiet",
]


@pytest.fixture
def workspace(tmp_path):
    synth = tmp_path / "synth"
    assert main([
        "synth", "--out-dir", str(synth), "--true-events", "3", "--docs-per-event", "6",
        "--vocab-size", "8", "--terms-per-event", "2", "--tokens-per-field", "3", "--seed", "1",
    ]) == 0
    return tmp_path


def _prepare(workspace):
    out = workspace / "prepared"
    assert main(["prepare", str(workspace / "synth" / "corpus.jsonl"), "--out-dir", str(out)]) == 0
    return out


def test_full_pipeline(workspace, capsys):
    prepared = _prepare(workspace)
    model_dir = workspace / "model"
    events_dir = workspace / "events"
    features_dir = workspace / "features"
    assert main(["train", str(prepared), "--out-dir", str(model_dir), *TINY_TRAIN]) == 0
    checkpoint = model_dir / "model.npz"
    assert checkpoint.exists()
    assert (model_dir / "trace.tsv").exists()

    assert main(["extract", str(checkpoint), str(prepared), "--out-dir", str(events_dir), "--merge"]) == 0
    assert {"events.json", "events.txt", "assignments.tsv"} <= {p.name for p in events_dir.iterdir()}

    report = workspace / "report.tsv"
    assert main([
        "eval", str(events_dir / "events.json"), "--gold", str(workspace / "synth" / "gold.json"),
        "--prepared", str(prepared), "--kmeans-k", "3", "--out", str(report),
    ]) == 0
    lines = report.read_text().splitlines()
    assert lines[0].split("\t") == ["method", "P", "R", "F"]
    assert [line.split("\t")[0] for line in lines[1:]] == ["AEM", "K-means"]

    assert main([
        "features", str(checkpoint), str(prepared), "--out-dir", str(features_dir),
        "--assignments", str(events_dir / "assignments.tsv"),
    ]) == 0
    assert (features_dir / "projection.svg").exists()
    header = (features_dir / "features.tsv").read_text().splitlines()[0].split("\t")
    assert header == ["doc_id", "f0", "f1", "f2", "f3"]

    manifest = read_manifest(model_dir, "train")
    assert manifest.seed == 5
    assert manifest.config["n_events"] == 3
    assert manifest.artifacts["checkpoint"] == "model.npz"
    assert not (model_dir / LOCK_NAME).exists()
    capsys.readouterr()


def test_prepare_is_reproducible(workspace):
    first = (_prepare(workspace) / MATRIX_FILE).read_bytes()
    second = (_prepare(workspace) / MATRIX_FILE).read_bytes()
    assert first == second


def test_prepare_reports_size_breakdown(workspace, capsys):
    _prepare(workspace)
    out = capsys.readouterr().out
    assert "Documents: 18" in out
    assert "V = " in out
    assert all(f"({label})" in out for label in ("entity", "location", "keyword", "date"))


def test_train_is_reproducible(workspace):
    prepared = _prepare(workspace)
    for name in ("a", "b"):
        assert main(["train", str(prepared), "--out-dir", str(workspace / name), *TINY_TRAIN]) == 0
    assert (workspace / "a" / "model.npz").read_bytes() == (workspace / "b" / "model.npz").read_bytes()


def test_record_missing_a_key_fails(tmp_path):
    corpus = tmp_path / "bad.jsonl"
    corpus.write_text(json.dumps({"id": "d1", "entities": [], "locations": [], "keywords": []}) + "\n")
    assert main(["prepare", str(corpus), "--out-dir", str(tmp_path / "out")]) == 1


def test_missing_corpus_fails(tmp_path):
    assert main(["prepare", str(tmp_path / "nope.jsonl"), "--out-dir", str(tmp_path / "out")]) == 1


def test_locked_directory_fails(workspace):
    out = workspace / "prepared"
    out.mkdir()
    (out / LOCK_NAME).write_text("123")
    assert main(["prepare", str(workspace / "synth" / "corpus.jsonl"), "--out-dir", str(out)]) == 1
    assert not (out / MATRIX_FILE).exists()


def test_invalid_train_flags_are_reported():
    args = build_parser().parse_args(["train", "p", "--out-dir", "o", "--n-events", "1", "--lr", "-1"])
    with pytest.raises(ConfigurationError, match="2 invalid"):
        resolve_train_config(args)


def test_flags_override_settings():
    args = build_parser().parse_args(["train", "p", "--out-dir", "o", "--n-critic", "7", "--no-spectral-norm"])
    config = resolve_train_config(args)
    assert config.n_critic == 7
    assert config.spectral_norm is False
    assert config.gp_lambda == 10.0


def test_alpha_must_match_event_count():
    args = argparse.Namespace(n_events=3, alpha=[1.0, 1.0])
    with pytest.raises(ConfigurationError):
        resolve_train_config(args)


def test_checkpoint_from_another_vocabulary(workspace):
    prepared = load_prepared(_prepare(workspace))
    meta = {"vocabulary_digest": "0" * 64, "field_sizes": list(prepared.matrix.field_sizes)}
    with pytest.raises(VocabularyMismatchError):
        check_vocabulary(meta, prepared)
    check_vocabulary(
        {"vocabulary_digest": prepared.vocabulary_digest, "field_sizes": list(prepared.matrix.field_sizes)}, prepared
    )


def test_extract_rejects_foreign_checkpoint(workspace, tmp_path):
    prepared = _prepare(workspace)
    assert main(["train", str(prepared), "--out-dir", str(workspace / "model"), *TINY_TRAIN]) == 0
    other = tmp_path / "other"
    assert main([
        "synth", "--out-dir", str(other), "--true-events", "2", "--docs-per-event", "4", "--vocab-size", "5",
        "--terms-per-event", "2", "--seed", "9",
    ]) == 0
    assert main(["prepare", str(other / "corpus.jsonl"), "--out-dir", str(other / "prepared")]) == 0
    code = main(["extract", str(workspace / "model" / "model.npz"), str(other / "prepared"), "--out-dir", str(tmp_path / "e")])
    assert code == 1


def _train_and_extract(workspace, *train_flags):
    prepared = _prepare(workspace)
    model_dir = workspace / "model"
    assert main(["train", str(prepared), "--out-dir", str(model_dir), *TINY_TRAIN, *train_flags]) == 0
    events_dir = workspace / "events"
    assert main(["extract", str(model_dir / "model.npz"), str(prepared), "--out-dir", str(events_dir)]) == 0
    return prepared, model_dir, events_dir


def test_eval_timing_and_sweep_record_their_outputs(workspace):
    prepared, _, events_dir = _train_and_extract(workspace)
    reports = workspace / "reports"
    gold = str(workspace / "synth" / "gold.json")
    assert main([
        "eval", str(events_dir / "events.json"), "--gold", gold, "--prepared", str(prepared),
        "--kmeans-k", "3", "--out", str(reports / "report.tsv"),
    ]) == 0
    flags = TINY_TRAIN[:-1]
    assert main([
        "timing", str(prepared), "--event-counts", "2", "3", "--kmeans-k", "3",
        "--out", str(reports / "timing.tsv"), *flags,
    ]) == 0
    assert main([
        "sweep", str(prepared), "--gold", gold, "--parameters", "n_critic",
        "--out", str(reports / "sweep.tsv"), *flags,
    ]) == 0

    for command, name in (("eval", "report.tsv"), ("timing", "timing.tsv"), ("sweep", "sweep.tsv")):
        manifest = read_manifest(reports, command)
        assert (reports / name).exists()
        assert name in manifest.artifacts.values()
        assert manifest.inputs["prepared"] == str(prepared)
    assert read_manifest(reports, "eval").inputs["gold"] == gold
    assert read_manifest(reports, "sweep").config["grid"] == {"n_critic": [5, 7, 10]}
    assert not (reports / LOCK_NAME).exists()


@pytest.mark.parametrize("command", ["eval", "timing", "sweep"])
def test_report_commands_respect_the_lock(workspace, command):
    prepared, _, events_dir = _train_and_extract(workspace)
    reports = workspace / "reports"
    reports.mkdir()
    (reports / LOCK_NAME).write_text("123")
    out = reports / f"{command}.tsv"
    gold = str(workspace / "synth" / "gold.json")
    argv = {
        "eval": ["eval", str(events_dir / "events.json"), "--gold", gold, "--out", str(out)],
        "timing": ["timing", str(prepared), "--event-counts", "2", "--kmeans-k", "3", "--out", str(out), *TINY_TRAIN[:-1]],
        "sweep": ["sweep", str(prepared), "--gold", gold, "--parameters", "depth", "--out", str(out), *TINY_TRAIN[:-1]],
    }[command]
    assert main(argv) == 1
    assert not out.exists()


def test_train_manifest_lists_periodic_checkpoints(workspace):
    prepared, model_dir, _ = _train_and_extract(workspace, "--checkpoint-every", "1")
    artifacts = read_manifest(model_dir, "train").artifacts
    assert artifacts["checkpoint_000001"] == "checkpoint_000001.npz"
    assert artifacts["checkpoint_000002"] == "checkpoint_000002.npz"
    assert main([
        "extract", str(model_dir / "checkpoint_000001.npz"), str(prepared), "--out-dir", str(workspace / "early"),
    ]) == 0


def test_lambda_zero_leaves_only_the_adversarial_loss(workspace):
    _, model_dir, _ = _train_and_extract(workspace, "--lambda", "0")
    trace = read_trace(model_dir / "trace.tsv")
    assert (trace["L"] == trace["L_d"]).all()


def test_default_lambda_adds_the_weighted_penalty(workspace):
    _, model_dir, _ = _train_and_extract(workspace)
    trace = read_trace(model_dir / "trace.tsv")
    np.testing.assert_allclose(trace["L"], trace["L_d"] + 10.0 * trace["L_gp"], rtol=1e-12)


def test_default_training_flags():
    config = resolve_train_config(build_parser().parse_args(["train", "p", "--out-dir", "o"]))
    assert config.gp_lambda == 10.0
    assert config.n_critic == 5
    assert config.batch_size == 32
    assert config.hidden_size == 200
    assert config.depth == 3
    assert (config.learning_rate, config.beta1, config.beta2) == (0.0002, 0.5, 0.999)
    assert config.spectral_norm and config.gradient_penalty
    assert config.alpha == [1.0] * config.n_events


def test_extract_rerun_is_byte_identical(workspace):
    prepared, model_dir, first = _train_and_extract(workspace)
    second = workspace / "events_again"
    assert main(["extract", str(model_dir / "model.npz"), str(prepared), "--out-dir", str(second)]) == 0
    for name in ("events.json", "events.txt", "assignments.tsv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


@pytest.mark.parametrize("flag", ["--true-events", "--docs-per-event", "--vocab-size", "--tokens-per-field"])
def test_explicit_zero_synthetic_settings_are_rejected(tmp_path, flag):
    out = tmp_path / "synth"
    assert main(["synth", "--out-dir", str(out), flag, "0"]) == 1
    assert not (out / "corpus.jsonl").exists()


def test_explicit_zero_noise_rate_is_kept(tmp_path):
    out = tmp_path / "synth"
    assert main([
        "synth", "--out-dir", str(out), "--true-events", "2", "--docs-per-event", "2", "--noise-rate", "0",
    ]) == 0
    assert read_manifest(out, "synth").config["noise_rate"] == 0.0
