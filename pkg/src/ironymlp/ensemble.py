"""10-fold cross-validation voting ensemble.

The training set is split into k stratified folds; member i trains on the
other k-1 folds with fold i as its early-stopping validation set, seeded
as seed+i.  At prediction time every member votes and the plurality label
wins; ties fall back to the highest mean softmax probability among the
tied labels, then the lowest class id.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import mlp
from .corpus import LabeledCorpus, RawTweet, n_classes
from .errors import IronyMlpError, ValidationError
from .pipeline import FeatureConfig, FeaturePipeline, fit_pipeline

N_FOLDS = 10


@dataclass
class EnsembleModel:
    pipeline: FeaturePipeline
    members: list                  # k MlpModels, fold order
    fold_assignment: dict          # tweet id -> fold
    task: str
    config: mlp.MlpConfig
    training_logs: tuple = ()      # one per member

    @property
    def n_folds(self) -> int:
        return len(self.members)


def split_folds(corpus: LabeledCorpus, k: int = N_FOLDS, seed: int = 0) -> dict:
    """Stratified fold assignment: per class, seeded shuffle + round-robin
    dealing with a pointer carried across classes (total sizes stay within 1)."""
    if k <= 0:
        raise ValidationError(f"fold count must be positive, got {k}")
    if k > len(corpus):
        raise ValidationError(f"cannot split {len(corpus)} tweets into {k} folds")
    rng = np.random.default_rng(seed)
    by_class: dict = {}
    for tweet in corpus.tweets:
        if tweet.label is None:
            raise ValidationError(f"tweet {tweet.id} has no label; cannot build folds")
        by_class.setdefault(tweet.label, []).append(tweet.id)
    assignment: dict = {}
    pointer = 0
    for label in sorted(by_class):
        ids = by_class[label]
        for idx in rng.permutation(len(ids)):
            assignment[ids[int(idx)]] = pointer % k
            pointer += 1
    return assignment


def _train_member(args):
    member_index, X, y, folds, config, classes = args
    cfg = replace(config, seed=config.seed + member_index)
    train_rows = folds != member_index
    dims = (X.shape[1], cfg.hidden_sizes[0], cfg.hidden_sizes[1], classes)
    model = mlp.init_mlp(dims, seed=cfg.seed)
    try:
        return mlp.train(model, X[train_rows], y[train_rows], X[~train_rows], y[~train_rows], cfg)
    except IronyMlpError as exc:
        raise type(exc)(f"fold {member_index}: {exc}") from exc
    except Exception as exc:
        raise RuntimeError(f"training member for fold {member_index} failed: {exc}") from exc


def train_ensemble(
    corpus: LabeledCorpus,
    resources,
    tagger,
    mlp_config: mlp.MlpConfig,
    feature_config: FeatureConfig = FeatureConfig(),
    k: int = N_FOLDS,
    seed: int = 0,
    jobs: int = 1,
    tag_overrides=None,
    extra_brown_tweets=None,
) -> EnsembleModel:
    """Fit the pipeline once on the full corpus, then train one member per fold."""
    pipeline = fit_pipeline(
        corpus,
        resources,
        tagger,
        config=feature_config,
        seed=seed,
        tag_overrides=tag_overrides,
        extra_brown_tweets=extra_brown_tweets,
    )
    X = pipeline.transform_corpus(corpus.tweets, tag_overrides)
    y = np.array(corpus.labels(), dtype=np.int64)
    classes = n_classes(corpus.task)
    if y.max() >= classes:
        raise ValidationError("label out of range for task")

    fold_assignment = split_folds(corpus, k=k, seed=seed)
    folds = np.array([fold_assignment[t.id] for t in corpus.tweets])
    base = replace(mlp_config, seed=seed)
    tasks = [(i, X, y, folds, base, classes) for i in range(k)]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_train_member, tasks))
    else:
        results = [_train_member(t) for t in tasks]
    members = [model for model, _ in results]
    logs = tuple(log for _, log in results)
    return EnsembleModel(
        pipeline=pipeline,
        members=members,
        fold_assignment=fold_assignment,
        task=corpus.task,
        config=base,
        training_logs=logs,
    )


def vote(ensemble: EnsembleModel, tweet: RawTweet, tag_overrides=None):
    """(label, vote counts, mean probability vector) for one tweet."""
    x = ensemble.pipeline.transform(tweet, tag_overrides).values
    return vote_on_features(ensemble, x)


def vote_on_features(ensemble: EnsembleModel, x: np.ndarray):
    labels = []
    probs = []
    for member in ensemble.members:
        label, p = mlp.predict(member, x)
        labels.append(label)
        probs.append(p)
    counts = Counter(labels)
    mean_probs = np.mean(probs, axis=0)
    top = max(counts.values())
    tied = sorted(label for label, c in counts.items() if c == top)
    if len(tied) > 1:
        best_prob = max(mean_probs[label] for label in tied)
        tied = [label for label in tied if mean_probs[label] == best_prob]
    return tied[0], dict(counts), mean_probs
