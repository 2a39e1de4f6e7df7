"""Feature pipeline: fit every extractor on training data, then map any
tweet to one fixed-width feature vector.

Block order is [lexical | syntactic | semantic | polarity]; with the
default configuration on a large enough corpus the widths are
1000+1000+2 / 45 / 300+100+300 / 12 = 2,759.  The tf-idf blocks stay
L2-normalized; all other ("dense") columns are standardized with training
mean/stddev, and a column whose training stddev is ~0 is forced to 0.
"""

from contextlib import contextmanager
from dataclasses import dataclass, replace

import numpy as np

from . import brown, lsi, ngrams, polarity, semantic
from .brown import DEFAULT_CLUSTER_COUNTS
from .corpus import LabeledCorpus, RawTweet, ResourceBundle
from .errors import ConsistencyError, IronyMlpError
from .lsi import DEFAULT_MIN_DF, DEFAULT_RANK
from .normalize import normalize_tweet
from .polarity import POLARITY_DIM
from .semantic import EMBEDDING_DIM
from .tokenization import PosTaggerModel, TokenizedTweet, process_tweet

#: fan-out offset so the SVD's seed differs from fold/member seeds
SVD_SEED_OFFSET = 7919

_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class FeatureConfig:
    lexical: bool = True
    syntactic: bool = True
    semantic: bool = True
    polarity: bool = True
    word_top_k: int = 1000
    char_top_k: int = 1000
    lsi_k: int = DEFAULT_RANK
    lsi_min_df: int = DEFAULT_MIN_DF
    lsi_method: str = "randomized"
    brown_counts: tuple = DEFAULT_CLUSTER_COUNTS
    brown_min_count: int = 1
    embedding_dim: int = EMBEDDING_DIM


@dataclass(frozen=True)
class BlockSpec:
    name: str
    family: str
    offset: int
    width: int


@dataclass(frozen=True)
class FeatureVector:
    tweet_id: int
    values: np.ndarray


def preprocess_corpus(tweets, resources, tagger, tag_overrides=None) -> list[TokenizedTweet]:
    """normalize -> tokenize -> tag for every raw tweet, order preserved."""
    return [
        process_tweet(normalize_tweet(t, resources), tagger, tag_overrides) for t in tweets
    ]


@dataclass
class FeaturePipeline:
    config: FeatureConfig
    resources: ResourceBundle
    tagger: PosTaggerModel
    word_vocab: ngrams.NgramVocabulary | None = None
    char_vocab: ngrams.NgramVocabulary | None = None
    pos_vocab: ngrams.PosVocabulary | None = None
    lsi_model: lsi.LsiModel | None = None
    clusterings: tuple = ()
    layout: tuple = ()
    scale_mask: np.ndarray | None = None
    scale_mean: np.ndarray | None = None
    scale_std: np.ndarray | None = None

    @property
    def width(self) -> int:
        return sum(b.width for b in self.layout)

    def family_widths(self) -> dict:
        widths: dict = {}
        for block in self.layout:
            widths[block.family] = widths.get(block.family, 0) + block.width
        return widths

    def _build_layout(self):
        blocks = []
        offset = 0

        def add(name, family, width):
            nonlocal offset
            blocks.append(BlockSpec(name=name, family=family, offset=offset, width=width))
            offset += width

        if self.config.lexical:
            add("word_ngrams", "lexical", len(self.word_vocab))
            add("char_ngrams", "lexical", len(self.char_vocab))
            add("surface", "lexical", 2)
        if self.config.syntactic:
            add("pos", "syntactic", len(self.pos_vocab))
        if self.config.semantic:
            add("embedding", "semantic", self.resources.embeddings.dim)
            add("lsi", "semantic", self.lsi_model.k)
            for clustering in self.clusterings:
                add(f"brown{clustering.C}", "semantic", clustering.C)
        if self.config.polarity:
            add("polarity", "polarity", polarity.POLARITY_DIM)
        self.layout = tuple(blocks)

    def _raw_vector(self, tweet: TokenizedTweet) -> np.ndarray:
        parts = []
        if self.config.lexical:
            parts.append(ngrams.vectorize_ngrams(tweet, self.word_vocab))
            parts.append(ngrams.vectorize_ngrams(tweet, self.char_vocab))
            parts.append(ngrams.surface_counts(tweet))
        if self.config.syntactic:
            parts.append(ngrams.vectorize_pos(tweet, self.pos_vocab))
        if self.config.semantic:
            parts.append(
                semantic.semantic_block(
                    tweet, self.resources.embeddings, self.lsi_model, self.clusterings
                )
            )
        if self.config.polarity:
            parts.append(polarity.polarity_block(tweet, self.resources))
        vec = np.concatenate(parts) if parts else np.zeros(0)
        if vec.shape != (self.width,):
            raise ConsistencyError(f"feature width {vec.shape} != layout width {self.width}")
        return vec

    def _scale(self, vec: np.ndarray) -> np.ndarray:
        out = vec.copy()
        mask = self.scale_mask
        dead = mask & (self.scale_std < _STD_FLOOR)
        live = mask & ~dead
        out[live] = (vec[live] - self.scale_mean[live]) / self.scale_std[live]
        out[dead] = 0.0
        return out

    def transform_processed(self, tweet: TokenizedTweet) -> FeatureVector:
        return FeatureVector(tweet_id=tweet.id, values=self._scale(self._raw_vector(tweet)))

    def transform(self, tweet: RawTweet, tag_overrides=None) -> FeatureVector:
        processed = process_tweet(
            normalize_tweet(tweet, self.resources), self.tagger, tag_overrides
        )
        return self.transform_processed(processed)

    def transform_corpus(self, tweets, tag_overrides=None) -> np.ndarray:
        processed = preprocess_corpus(tweets, self.resources, self.tagger, tag_overrides)
        return np.stack([self.transform_processed(t).values for t in processed])


@contextmanager
def _block_context(name: str):
    """Re-raise extractor errors with the failing block named."""
    try:
        yield
    except IronyMlpError as exc:
        raise type(exc)(f"{name} block: {exc}") from exc


def fit_pipeline(
    corpus: LabeledCorpus,
    resources: ResourceBundle,
    tagger: PosTaggerModel,
    config: FeatureConfig = FeatureConfig(),
    seed: int = 0,
    tag_overrides=None,
    extra_brown_tweets=None,
) -> FeaturePipeline:
    """Fit all extractors on the training corpus only, then the dense scaler.

    `extra_brown_tweets` optionally widens the clustering corpus with extra
    tokenized tweets; everything else sees only `corpus`.
    """
    pipeline = FeaturePipeline(config=config, resources=resources, tagger=tagger)
    processed = preprocess_corpus(corpus.tweets, resources, tagger, tag_overrides)

    if config.lexical:
        with _block_context("lexical"):
            pipeline.word_vocab = ngrams.fit_ngram_vocab(
                processed, ngrams.WORD_LEVEL, config.word_top_k
            )
            pipeline.char_vocab = ngrams.fit_ngram_vocab(
                processed, ngrams.CHAR_LEVEL, config.char_top_k
            )
    if config.syntactic:
        with _block_context("syntactic"):
            pipeline.pos_vocab = ngrams.fit_pos_vocab(processed)
    if config.semantic:
        with _block_context("semantic"):
            pipeline.lsi_model = lsi.fit_lsi(
                processed,
                k=config.lsi_k,
                min_df=config.lsi_min_df,
                method=config.lsi_method,
                seed=seed + SVD_SEED_OFFSET,
            )
            cluster_corpus = list(processed) + list(extra_brown_tweets or [])
            stats = brown.collect_bigram_stats(cluster_corpus, config.brown_min_count)
            pipeline.clusterings = tuple(
                brown.train_brown(stats, C) for C in config.brown_counts
            )
    pipeline._build_layout()

    mask = np.zeros(pipeline.width, dtype=bool)
    for block in pipeline.layout:
        if block.name not in ("word_ngrams", "char_ngrams", "pos"):
            mask[block.offset : block.offset + block.width] = True
    raw = np.stack([pipeline._raw_vector(t) for t in processed])
    pipeline.scale_mask = mask
    pipeline.scale_mean = np.where(mask, raw.mean(axis=0), 0.0)
    pipeline.scale_std = np.where(mask, raw.std(axis=0), 1.0)
    return pipeline


def toggle_config(config: FeatureConfig, **flags) -> FeatureConfig:
    return replace(config, **flags)


def write_feature_matrix(path, pipeline: FeaturePipeline, tweets, tag_overrides=None) -> None:
    """Delimited export: layout header lines, then one ``id<TAB>values`` row
    per tweet (exact float repr)."""
    with open(path, "w", encoding="utf-8") as handle:
        for block in pipeline.layout:
            handle.write(f"# block\t{block.name}\t{block.family}\t{block.offset}\t{block.width}\n")
        for tweet in tweets:
            fv = pipeline.transform(tweet, tag_overrides)
            handle.write(
                "\t".join([str(fv.tweet_id)] + [repr(float(v)) for v in fv.values]) + "\n"
            )
