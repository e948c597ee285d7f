import argparse
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
import structlog
from pydantic import ValidationError

from src.cli.artifacts import PreparedCorpus, load_prepared, save_prepared
from src.config import EventSettings, TrainConfig, settings
from src.corpus import (
    build_vocabularies,
    corpus_statistics,
    filter_rare_events,
    get_schema,
    read_corpus,
    represent_corpus,
    resolve_min_df,
    write_corpus,
)
from src.errors import AEMError, ConfigurationError, VocabularyMismatchError
from src.evaluation import (
    DEFAULT_GRID,
    SyntheticSpec,
    generate_synthetic_corpus,
    gold_from_corpus,
    gold_from_synthetic,
    match_events,
    parameter_sweep,
    precision_recall_f,
    read_gold,
    report_frame,
    run_kmeans,
    scaling_methods,
    summarize,
    timing_harness,
    write_gold,
    write_report,
)
from src.events import read_assignments, read_event_table, render_event_table, write_assignments, write_event_table
from src.events.extract import extract_events
from src.model import load_model, save_model
from src.training import train
from src.utils.fingerprint import file_digest
from src.utils.log_config import configure_logging
from src.utils.manifest import RunManifest, run_lock
from src.visualization import discriminative_features, plot_projection, project_2d, write_matrix

logger = structlog.get_logger(__name__)

# flag dest -> TrainConfig field
TRAIN_FLAGS = {
    "n_events": "n_events",
    "hidden": "hidden_size",
    "disc_hidden": "disc_hidden_size",
    "depth": "depth",
    "gp_lambda": "gp_lambda",
    "n_critic": "n_critic",
    "batch_size": "batch_size",
    "lr": "learning_rate",
    "beta1": "beta1",
    "beta2": "beta2",
    "alpha": "dirichlet_alpha",
    "seed": "seed",
    "max_g_steps": "max_g_steps",
    "window": "convergence_window",
    "min_g_steps": "min_g_steps",
    "tolerance": "tolerance",
    "spectral_norm": "spectral_norm",
    "gradient_penalty": "gradient_penalty",
    "non_saturating": "non_saturating",
    "gp_target": "gp_target",
    "power_iterations": "n_power_iterations",
    "checkpoint_every": "checkpoint_every",
}


def add_train_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("training")
    group.add_argument("--n-events", type=int, help="number of latent events E")
    group.add_argument("--hidden", type=int, help="generator hidden width H")
    group.add_argument("--disc-hidden", type=int, help="discriminator hidden width")
    group.add_argument("--depth", type=int, help="generator depth (3, 4 or 5)")
    group.add_argument("--lambda", dest="gp_lambda", type=float, help="gradient-penalty coefficient")
    group.add_argument("--n-critic", type=int, help="discriminator steps per generator step")
    group.add_argument("--batch-size", type=int, help="minibatch size m")
    group.add_argument("--lr", type=float, help="Adam learning rate")
    group.add_argument("--beta1", type=float)
    group.add_argument("--beta2", type=float)
    group.add_argument("--alpha", type=float, nargs="+", help="Dirichlet concentrations (one per event)")
    group.add_argument("--seed", type=int)
    group.add_argument("--max-g-steps", type=int)
    group.add_argument("--window", type=int, help="convergence window in generator steps")
    group.add_argument("--min-g-steps", type=int, help="generator steps before convergence may stop training")
    group.add_argument("--tolerance", type=float, help="relative convergence tolerance")
    group.add_argument("--no-spectral-norm", dest="spectral_norm", action="store_const", const=False)
    group.add_argument("--no-gradient-penalty", dest="gradient_penalty", action="store_const", const=False)
    group.add_argument("--non-saturating", action="store_const", const=True)
    group.add_argument("--gp-target", choices=["probability", "logit"])
    group.add_argument("--power-iterations", type=int)
    group.add_argument("--checkpoint-every", type=int)


def resolve_train_config(args: argparse.Namespace) -> TrainConfig:
    """settings.train overridden by the flags that were given; every invalid value is reported"""
    values = settings.train.model_dump()
    for dest, name in TRAIN_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            values[name] = value
    try:
        return TrainConfig.model_validate(values)
    except ValidationError as e:
        for err in e.errors():
            logger.error("Invalid configuration", field=".".join(str(p) for p in err["loc"]), message=err["msg"])
        raise ConfigurationError(f"{e.error_count()} invalid configuration value(s)")


def event_settings(args: argparse.Namespace) -> EventSettings:
    values = settings.events.model_dump()
    if getattr(args, "top_n", None) is not None:
        values["TOP_N"] = args.top_n
    if getattr(args, "merge", None) is not None:
        values["MERGE"] = args.merge
    if getattr(args, "merge_threshold", None) is not None:
        values["MERGE_THRESHOLD"] = args.merge_threshold
    try:
        return EventSettings.model_validate(values)
    except ValidationError as e:
        raise ConfigurationError(str(e))


def check_vocabulary(meta: dict, prepared: PreparedCorpus) -> None:
    if meta.get("vocabulary_digest") != prepared.vocabulary_digest or list(meta.get("field_sizes", [])) != list(
        prepared.matrix.field_sizes
    ):
        raise VocabularyMismatchError(
            f"Checkpoint was trained on a different vocabulary than {prepared.directory} "
            f"(field sizes {meta.get('field_sizes')} vs {list(prepared.matrix.field_sizes)})"
        )


def load_gold_events(args: argparse.Namespace, prepared: Optional[PreparedCorpus]):
    if args.gold:
        return read_gold(args.gold)
    if prepared is None:
        raise ConfigurationError("Either --gold or --prepared (to derive gold sets from labels) is required")
    return gold_from_corpus(prepared.corpus, settings.evaluation.MATCH_TOP_K)


def cmd_prepare(args: argparse.Namespace) -> None:
    schema = get_schema(args.schema or settings.corpus.FIELD_SCHEMA)
    with run_lock(args.out_dir) as out:
        corpus = read_corpus(args.corpus, schema)
        min_docs = args.min_event_docs if args.min_event_docs is not None else settings.corpus.MIN_EVENT_DOCS
        corpus = filter_rare_events(corpus, min_docs)
        min_df = resolve_min_df(len(corpus), args.min_df)
        vocabs = build_vocabularies(corpus, min_df, schema)
        matrix = represent_corpus(corpus, vocabs)
        paths = save_prepared(out, corpus, vocabs, matrix, schema, min_df, corpus_statistics(corpus, schema))
        manifest = RunManifest(
            command="prepare",
            config={"min_df": min_df, "schema": schema.name, "min_event_docs": min_docs},
            corpus_fingerprint=file_digest(args.corpus),
            inputs={"corpus": str(args.corpus)},
        )
        for name, path in paths.items():
            manifest.add_artifact(name, path)
        manifest.write(out)
    sizes = matrix.field_sizes
    print(f"Documents: {len(matrix)}")
    print(f"V = {sum(sizes)} = " + " + ".join(f"{size} ({label})" for label, size in zip(schema.labels, sizes)))


def cmd_train(args: argparse.Namespace) -> None:
    config = resolve_train_config(args)
    prepared = load_prepared(args.prepared)
    metadata = {"vocabulary_digest": prepared.vocabulary_digest, "schema": prepared.schema.name}
    with run_lock(args.out_dir) as out:
        G, D, trace = train(
            prepared.matrix,
            config,
            np.random.default_rng(config.seed),
            checkpoint_dir=out,
            progress=None if not args.quiet else False,
            checkpoint_metadata=metadata,
        )
        model_path = save_model(out / "model.npz", G, D, config, metadata)
        trace_path = trace.write(out / "trace.tsv")
        manifest = RunManifest(
            command="train",
            config=config.model_dump(),
            corpus_fingerprint=prepared.vocabulary_digest,
            seed=config.seed,
            inputs={"prepared": str(prepared.directory)},
        )
        manifest.add_artifact("checkpoint", model_path)
        manifest.add_artifact("trace", trace_path)
        for path in trace.checkpoints:
            manifest.add_artifact(path.stem, path)
        manifest.write(out)
    print(f"Trained {len(trace)} generator steps ({trace.stop_reason}) in {trace.total_seconds:.1f}s")
    print(f"Checkpoint: {model_path}")


def cmd_extract(args: argparse.Namespace) -> None:
    G, _, config, meta = load_model(args.checkpoint)
    prepared = load_prepared(args.prepared)
    check_vocabulary(meta, prepared)
    opts = event_settings(args)
    table, assignment = extract_events(G, prepared.vocabs, prepared.matrix.matrix, opts, prepared.schema)
    with run_lock(args.out_dir) as out:
        events_path = write_event_table(out / "events.json", table, opts.TOP_N)
        rendered = render_event_table(table, opts.TOP_N)
        text_path = out / "events.txt"
        text_path.write_text(rendered, encoding="utf-8")
        assignments_path = write_assignments(out / "assignments.tsv", prepared.matrix.ids, assignment)
        manifest = RunManifest(
            command="extract",
            config={"events": opts.model_dump(), "n_events": config.n_events},
            corpus_fingerprint=prepared.vocabulary_digest,
            seed=config.seed,
            inputs={"checkpoint": str(args.checkpoint), "prepared": str(prepared.directory)},
        )
        for name, path in (("events", events_path), ("events_text", text_path), ("assignments", assignments_path)):
            manifest.add_artifact(name, path)
        manifest.write(out)
    print(rendered)


def cmd_eval(args: argparse.Namespace) -> None:
    prepared = load_prepared(args.prepared) if args.prepared else None
    gold = load_gold_events(args, prepared)
    table = read_event_table(args.events)
    ev = settings.evaluation
    matching = match_events(table, gold, ev.MATCH_TOP_K, ev.CORRECT_THRESHOLD)
    reports = {"AEM": precision_recall_f(matching)}
    if args.kmeans_k:
        if prepared is None:
            raise ConfigurationError("--kmeans-k needs --prepared")
        reports["K-means"] = run_kmeans(
            prepared.matrix.matrix, prepared.vocabs, gold, args.kmeans_k, args.seed, ev, prepared.schema
        )
    logger.info("Correctness judged by automated gold matching", threshold=ev.CORRECT_THRESHOLD, top_k=ev.MATCH_TOP_K)
    inputs = {"events": str(args.events)}
    if args.gold:
        inputs["gold"] = str(args.gold)
    if prepared is not None:
        inputs["prepared"] = str(prepared.directory)
    with run_lock(Path(args.out).parent) as out_dir:
        manifest = RunManifest(
            command="eval",
            config={"evaluation": ev.model_dump(), "kmeans_k": args.kmeans_k},
            corpus_fingerprint=prepared.vocabulary_digest if prepared is not None else None,
            seed=args.seed,
            inputs=inputs,
        )
        manifest.add_artifact("report", write_report(out_dir / Path(args.out).name, reports))
        manifest.write(out_dir)
    print(report_frame(reports).to_string(index=False))


def cmd_features(args: argparse.Namespace) -> None:
    _, D, _, meta = load_model(args.checkpoint)
    prepared = load_prepared(args.prepared)
    check_vocabulary(meta, prepared)
    features = discriminative_features(D, prepared.matrix.matrix)
    coords = project_2d(features)
    if args.assignments:
        labels = ["none" if pd.isna(v) else f"E{int(v)}" for v in read_assignments(args.assignments)["event"]]
    elif any(doc.gold_event for doc in prepared.corpus):
        labels = [doc.gold_event or "unlabelled" for doc in prepared.corpus]
    else:
        labels = None
    ids = prepared.matrix.ids
    with run_lock(args.out_dir) as out:
        manifest = RunManifest(
            command="features",
            corpus_fingerprint=prepared.vocabulary_digest,
            inputs={"checkpoint": str(args.checkpoint), "prepared": str(prepared.directory)},
        )
        manifest.add_artifact("features", write_matrix(out / "features.tsv", ids, features, "f"))
        manifest.add_artifact("projection", write_matrix(out / "projection.tsv", ids, coords, "pc"))
        manifest.add_artifact("scatter", plot_projection(out / "projection.svg", coords, labels))
        manifest.write(out)
    print(f"Exported {features.shape[0]} x {features.shape[1]} discriminative features to {args.out_dir}")


def write_table_with_manifest(
    command: str,
    out: Path,
    frame: pd.DataFrame,
    config: dict,
    prepared: PreparedCorpus,
    seed: int,
    inputs: Optional[dict] = None,
) -> Path:
    """Tab-separated table under the lock of its directory, recorded in manifest_<command>.json"""
    with run_lock(out.parent) as out_dir:
        path = out_dir / out.name
        frame.to_csv(path, sep="\t", index=False, float_format="%.17g")
        manifest = RunManifest(
            command=command,
            config=config,
            corpus_fingerprint=prepared.vocabulary_digest,
            seed=seed,
            inputs={"prepared": str(prepared.directory), **(inputs or {})},
        )
        manifest.add_artifact(command, path)
        manifest.write(out_dir)
    return path


def cmd_timing(args: argparse.Namespace) -> None:
    config = resolve_train_config(args)
    prepared = load_prepared(args.prepared)
    methods = scaling_methods(
        prepared.matrix.matrix,
        prepared.matrix.field_sizes,
        config,
        args.event_counts,
        args.kmeans_k,
        settings.evaluation.KMEANS_RESTARTS,
    )
    frame = timing_harness(methods, args.repeats)
    run_config = {
        "train": config.model_dump(),
        "event_counts": list(args.event_counts),
        "kmeans_k": args.kmeans_k,
        "repeats": args.repeats,
    }
    write_table_with_manifest("timing", Path(args.out), frame, run_config, prepared, config.seed)
    print(summarize(frame).to_string(index=False))


def cmd_sweep(args: argparse.Namespace) -> None:
    config = resolve_train_config(args)
    prepared = load_prepared(args.prepared)
    gold = load_gold_events(args, prepared)
    grid = {p: DEFAULT_GRID[p] for p in args.parameters} if args.parameters else DEFAULT_GRID
    frame = parameter_sweep(
        prepared.matrix.matrix,
        prepared.vocabs,
        gold,
        config,
        grid,
        event_settings(args),
        settings.evaluation,
        prepared.schema,
    )
    run_config = {"train": config.model_dump(), "grid": {k: list(v) for k, v in grid.items()}}
    inputs = {"gold": str(args.gold)} if args.gold else {}
    write_table_with_manifest("sweep", Path(args.out), frame, run_config, prepared, config.seed, inputs)
    print(frame.to_string(index=False))


def cmd_synth(args: argparse.Namespace) -> None:
    defaults = settings.synthetic

    def flag(value, default):
        return default if value is None else value

    try:
        spec = SyntheticSpec(
            true_events=flag(args.true_events, defaults.TRUE_EVENTS),
            docs_per_event=flag(args.docs_per_event, defaults.DOCS_PER_EVENT),
            field_vocab_sizes=tuple([flag(args.vocab_size, defaults.VOCAB_SIZE)] * 4),
            terms_per_event=flag(args.terms_per_event, defaults.TERMS_PER_EVENT),
            noise_rate=flag(args.noise_rate, defaults.NOISE_RATE),
            tokens_per_field=flag(args.tokens_per_field, defaults.TOKENS_PER_FIELD),
            seed=flag(args.seed, 0),
        )
    except ValidationError as e:
        raise ConfigurationError(f"Invalid synthetic corpus settings: {e.error_count()} error(s)\n{e}")
    corpus, _, truth = generate_synthetic_corpus(spec)
    with run_lock(args.out_dir) as out:
        write_corpus(out / "corpus.jsonl", corpus)
        write_gold(out / "gold.json", gold_from_synthetic(spec, truth, settings.evaluation.MATCH_TOP_K))
        manifest = RunManifest(command="synth", config=spec.model_dump(), seed=spec.seed)
        manifest.add_artifact("corpus", out / "corpus.jsonl")
        manifest.add_artifact("gold", out / "gold.json")
        manifest.write(out)
    print(f"Wrote {len(corpus)} documents for {spec.true_events} events to {args.out_dir}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aem", description="Adversarial event extraction")
    parser.add_argument("--log-level", default=None)
    parser.add_argument("--log-console", action="store_true", help="human-readable logs instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="build vocabularies and document vectors")
    p.add_argument("corpus", type=Path)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--min-df", type=int)
    p.add_argument("--schema", choices=["event", "news"])
    p.add_argument("--min-event-docs", type=int)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="train generator and discriminator")
    p.add_argument("prepared", type=Path)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--quiet", action="store_true", help="no progress bar")
    add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("extract", help="decode events and assign documents")
    p.add_argument("checkpoint", type=Path)
    p.add_argument("prepared", type=Path)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--top-n", type=int)
    p.add_argument("--merge", action="store_const", const=True)
    p.add_argument("--merge-threshold", type=float)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eval", help="score an event table against gold events")
    p.add_argument("events", type=Path)
    p.add_argument("--gold", type=Path)
    p.add_argument("--prepared", type=Path, help="derive gold sets from labels and/or run K-means")
    p.add_argument("--kmeans-k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("report.tsv"))
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("features", help="export discriminative features and a PCA scatter")
    p.add_argument("checkpoint", type=Path)
    p.add_argument("prepared", type=Path)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--assignments", type=Path, help="color points by assigned event")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("timing", help="K-means vs training wall-clock for several event counts")
    p.add_argument("prepared", type=Path)
    p.add_argument("--event-counts", type=int, nargs="+", default=[15, 30])
    p.add_argument("--kmeans-k", type=int)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("timing.tsv"))
    add_train_flags(p)
    p.set_defaults(func=cmd_timing)

    p = sub.add_parser("sweep", help="one-factor-at-a-time sensitivity of n_critic, hidden size and depth")
    p.add_argument("prepared", type=Path)
    p.add_argument("--gold", type=Path)
    p.add_argument("--parameters", nargs="+", choices=sorted(DEFAULT_GRID))
    p.add_argument("--merge", action="store_const", const=True)
    p.add_argument("--out", type=Path, default=Path("sweep.tsv"))
    add_train_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("synth", help="write a synthetic labelled corpus and its gold file")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--true-events", type=int)
    p.add_argument("--docs-per-event", type=int)
    p.add_argument("--vocab-size", type=int)
    p.add_argument("--terms-per-event", type=int)
    p.add_argument("--noise-rate", type=float)
    p.add_argument("--tokens-per-field", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.output.LOG_LEVEL, json=settings.output.LOG_JSON and not args.log_console)
    try:
        args.func(args)
    except AEMError as e:
        logger.error("Command failed", command=args.command, error_type=type(e).__name__, error=str(e))
        return 1
    except Exception as e:
        logger.error("Unexpected failure", command=args.command, error=str(e))
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
