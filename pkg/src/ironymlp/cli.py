"""Command-line interface.

Subcommands: train, predict, evaluate, normalize, brown, features.
Exit codes: 0 ok, 1 unexpected error, 2 usage, 3 missing resource,
4 parse error, 5 validation error, 6 config error, 7 corrupt model,
8 task mismatch, 9 I/O failure.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .brown import collect_bigram_stats, train_brown, write_clusters_tsv
from .config import RunConfig, read_config_file
from .corpus import RawTweet, load_dataset
from .ensemble import train_ensemble, vote_on_features
from .errors import (
    IronyMlpError,
    ParseError,
    ResourceError,
    TaskMismatchError,
    ValidationError,
)
from .metrics import evaluate, format_report
from .mlp import predict
from .model_store import load_model, save_model
from .normalize import normalize_tweet
from .pipeline import preprocess_corpus, write_feature_matrix
from .report import write_eval_outputs, write_training_outputs
from .tokenization import read_sidecar_tags


def _add_config_flags(parser):
    parser.add_argument("--config", help="INI config file; flags override its values")
    parser.add_argument("--task", choices=["A", "B"], help="subtask (binary A, 4-class B)")
    parser.add_argument("--seed", type=int, help="master seed for every random choice")
    parser.add_argument("--jobs", type=int, help="concurrent fold trainings (1 = serial)")
    parser.add_argument("--folds", type=int, help="ensemble fold count")
    for key in (
        "embeddings", "positive-lexicon", "negative-lexicon", "normalization-dict",
        "emoji-map", "emoji-polarity", "tagger-weights", "pos-sidecar",
    ):
        parser.add_argument(f"--{key}", help=f"path of the {key.replace('-', ' ')} file")
    parser.add_argument("--hidden1", type=int, help="first hidden layer width")
    parser.add_argument("--hidden2", type=int, help="second hidden layer width")
    parser.add_argument("--learning-rate", type=float)
    parser.add_argument("--l2", type=float)
    parser.add_argument("--max-epochs", type=int)
    parser.add_argument("--patience", type=int, help="early-stop patience in epochs")
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--word-top-k", type=int)
    parser.add_argument("--char-top-k", type=int)
    parser.add_argument("--lsi-k", type=int)
    parser.add_argument("--lsi-min-df", type=int)
    parser.add_argument("--lsi-method", choices=["randomized", "dense"])
    parser.add_argument("--brown-clusters", help="comma-separated cluster counts")
    parser.add_argument("--brown-min-count", type=int)
    parser.add_argument("--brown-corpus", help="extra plain-text corpus for clustering")
    for block in ("lexical", "syntactic", "semantic", "polarity"):
        parser.add_argument(
            f"--no-{block}", action="store_true", help=f"disable the {block} feature block"
        )


def _resolve_config(args) -> RunConfig:
    config = read_config_file(args.config) if args.config else RunConfig()
    if args.task:
        config.task = args.task
    for attr in ("seed", "jobs", "folds", "hidden1", "hidden2", "batch_size"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, attr, value)
    if args.learning_rate is not None:
        config.learning_rate = args.learning_rate
    if args.l2 is not None:
        config.l2 = args.l2
    if args.max_epochs is not None:
        config.max_epochs = args.max_epochs
    if args.patience is not None:
        config.early_stop_patience = args.patience
    for key in ("word_top_k", "char_top_k", "lsi_k", "lsi_min_df"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    if args.lsi_method is not None:
        config.lsi_method = args.lsi_method
    if args.brown_clusters is not None:
        config.brown_clusters = tuple(int(v) for v in args.brown_clusters.split(",") if v.strip())
    if args.brown_min_count is not None:
        config.brown_min_count = args.brown_min_count
    for key in (
        "embeddings", "positive_lexicon", "negative_lexicon", "normalization_dict",
        "emoji_map", "emoji_polarity", "tagger_weights", "pos_sidecar", "brown_corpus",
    ):
        value = getattr(args, key, None)
        if value is not None:
            config.paths[key] = value
    for block in ("lexical", "syntactic", "semantic", "polarity"):
        if getattr(args, f"no_{block}"):
            setattr(config, block, False)
    return config


def _load_extra_brown(config: RunConfig, resources, tagger):
    path = config.paths.get("brown_corpus")
    if not path:
        return None
    path = Path(path)
    if not path.exists():
        raise ResourceError(f"extra clustering corpus not found: {path}")
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    raws = [RawTweet(id=-(i + 1), text=text) for i, text in enumerate(lines)]
    return preprocess_corpus(raws, resources, tagger)


def cmd_train(args) -> int:
    config = _resolve_config(args)
    corpus = load_dataset(args.train, config.task)
    resources = config.load_resources()
    tagger = config.load_tagger()
    overrides = None
    if config.paths.get("pos_sidecar"):
        overrides = read_sidecar_tags(
            config.paths["pos_sidecar"], required_ids=[t.id for t in corpus.tweets]
        )
    extra = _load_extra_brown(config, resources, tagger)
    model = train_ensemble(
        corpus,
        resources,
        tagger,
        mlp_config=config.mlp_config(),
        feature_config=config.feature_config(),
        k=config.folds,
        seed=config.seed,
        jobs=config.jobs,
        tag_overrides=overrides,
        extra_brown_tweets=extra,
    )
    save_model(model, args.model)
    report_dir = args.report_dir or f"{args.model}_report"
    written = write_training_outputs(model.training_logs, report_dir)
    widths = model.pipeline.family_widths()
    print(f"trained {model.n_folds}-fold ensemble for task {model.task}")
    print(
        "feature width "
        + str(model.pipeline.width)
        + " ("
        + ", ".join(f"{k} {v}" for k, v in widths.items())
        + ")"
    )
    print(f"model written to {args.model}")
    print(f"training report in {report_dir} ({len(written)} files)")
    return 0


def _read_predictions(path):
    path = Path(path)
    if not path.exists():
        raise ParseError(f"predictions file not found: {path}")
    table = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ParseError(f"predictions line {lineno}: expected at least 2 columns")
            try:
                table[int(parts[0])] = int(parts[1])
            except ValueError as exc:
                raise ParseError(f"predictions line {lineno}: bad id or label") from exc
    if not table:
        raise ParseError(f"{path}: no prediction rows")
    return table


def cmd_predict(args) -> int:
    model = load_model(args.model)
    if args.task and args.task != model.task:
        raise TaskMismatchError(
            f"model was trained for task {model.task}, data given as task {args.task}"
        )
    corpus = load_dataset(args.input, model.task)
    overrides = None
    if args.pos_sidecar:
        overrides = read_sidecar_tags(args.pos_sidecar)
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write("# id\tlabel\tmember_votes\tmean_probabilities\n")
        for tweet in corpus.tweets:
            x = model.pipeline.transform(tweet, overrides).values
            member_labels = [predict(member, x)[0] for member in model.members]
            label, _, mean_probs = vote_on_features(model, x)
            votes = " ".join(str(lbl) for lbl in member_labels)
            probs = " ".join(repr(float(p)) for p in mean_probs)
            handle.write(f"{tweet.id}\t{label}\t{votes}\t{probs}\n")
    print(f"predictions for {len(corpus)} tweets written to {args.output}")
    return 0


def cmd_evaluate(args) -> int:
    predictions = _read_predictions(args.predictions)
    gold = load_dataset(args.gold, args.task)
    missing = [t.id for t in gold.tweets if t.id not in predictions]
    if missing:
        raise ValidationError(f"predictions miss tweet ids: {missing[:10]}")
    if any(t.label is None for t in gold.tweets):
        raise ValidationError("gold dataset has unlabeled rows")
    report = evaluate(
        [t.label for t in gold.tweets],
        [predictions[t.id] for t in gold.tweets],
        args.task,
        macro_f1_of_means=args.macro_f1_of_means,
    )
    print(format_report(report), end="")
    report_dir = args.report_dir or f"{args.predictions}_report"
    written = write_eval_outputs(report, report_dir)
    print(f"report files in {report_dir} ({len(written)} files)")
    return 0


def cmd_normalize(args) -> int:
    config = _resolve_config(args)
    corpus = load_dataset(args.input, task=None)
    resources = config.load_resources()
    with open(args.output, "w", encoding="utf-8") as handle:
        for tweet in corpus.tweets:
            normalized = normalize_tweet(tweet, resources)
            if tweet.label is None:
                handle.write(f"{tweet.id}\t{normalized.text}\n")
            else:
                handle.write(f"{tweet.id}\t{tweet.label}\t{normalized.text}\n")
    print(f"normalized {len(corpus)} tweets into {args.output}")
    return 0


def cmd_brown(args) -> int:
    config = _resolve_config(args)
    corpus = load_dataset(args.input, task=None)
    resources = config.load_resources()
    tagger = config.load_tagger()
    processed = preprocess_corpus(corpus.tweets, resources, tagger)
    extra = _load_extra_brown(config, resources, tagger)
    if extra:
        processed = processed + extra
    stats = collect_bigram_stats(processed, config.brown_min_count)
    clustering = train_brown(stats, args.clusters)
    write_clusters_tsv(clustering, stats, args.output)
    print(
        f"clustered {len(clustering.vocab_order)} words into "
        f"{clustering.n_clusters} clusters (AMI {clustering.ami:.6f}); "
        f"written to {args.output}"
    )
    return 0


def cmd_features(args) -> int:
    model = load_model(args.model)
    corpus = load_dataset(args.input, model.task)
    overrides = None
    if args.pos_sidecar:
        overrides = read_sidecar_tags(args.pos_sidecar)
    write_feature_matrix(args.output, model.pipeline, corpus.tweets, overrides)
    print(
        f"feature matrix ({len(corpus)} x {model.pipeline.width}) written to {args.output}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ironymlp",
        description="Tweet irony detection with an MLP voting ensemble",
    )
    parser.add_argument("--version", action="version", version=f"ironymlp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit the pipeline and the fold ensemble")
    p_train.add_argument("--train", required=True, help="training dataset TSV")
    p_train.add_argument("--model", required=True, help="output model file")
    p_train.add_argument("--report-dir", help="training-report directory (default <model>_report)")
    _add_config_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_predict = sub.add_parser("predict", help="label a dataset with a trained model")
    p_predict.add_argument("--model", required=True)
    p_predict.add_argument("--input", required=True, help="dataset TSV to label")
    p_predict.add_argument("--output", required=True, help="predictions TSV")
    p_predict.add_argument("--task", choices=["A", "B"], help="detect task mismatches")
    p_predict.add_argument("--pos-sidecar", help="externally produced POS tags")
    p_predict.set_defaults(func=cmd_predict)

    p_eval = sub.add_parser("evaluate", help="score predictions against a gold dataset")
    p_eval.add_argument("--predictions", required=True)
    p_eval.add_argument("--gold", required=True)
    p_eval.add_argument("--task", choices=["A", "B"], required=True)
    p_eval.add_argument("--report-dir", help="report directory (default <predictions>_report)")
    p_eval.add_argument(
        "--macro-f1-of-means",
        action="store_true",
        help="macro-F1 from averaged precision/recall instead of mean per-class F1",
    )
    p_eval.set_defaults(func=cmd_evaluate)

    p_norm = sub.add_parser("normalize", help="write the normalized form of a dataset")
    p_norm.add_argument("--input", required=True)
    p_norm.add_argument("--output", required=True)
    _add_config_flags(p_norm)
    p_norm.set_defaults(func=cmd_normalize)

    p_brown = sub.add_parser("brown", help="cluster the corpus words")
    p_brown.add_argument("--input", required=True, help="dataset TSV")
    p_brown.add_argument("--clusters", type=int, required=True, help="cluster count")
    p_brown.add_argument("--output", required=True, help="clusters TSV")
    _add_config_flags(p_brown)
    p_brown.set_defaults(func=cmd_brown)

    p_feat = sub.add_parser("features", help="export the feature matrix of a dataset")
    p_feat.add_argument("--model", required=True)
    p_feat.add_argument("--input", required=True)
    p_feat.add_argument("--output", required=True)
    p_feat.add_argument("--pos-sidecar")
    p_feat.set_defaults(func=cmd_features)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IronyMlpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 9


if __name__ == "__main__":
    sys.exit(main())
