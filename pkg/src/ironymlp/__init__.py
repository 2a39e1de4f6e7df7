"""Irony detection in tweets: lexical/syntactic/semantic/polarity features
feeding a 10-fold MLP voting ensemble."""

__version__ = "0.1.0"

from .corpus import (
    EmbeddingTable,
    LabeledCorpus,
    RawTweet,
    ResourceBundle,
    load_dataset,
    load_embedding_table,
    load_emoji_map,
    load_lexicon,
    load_normalization_dict,
    load_resources,
)
from .normalize import NormalizedTweet, normalize_tweet
from .tokenization import PosTaggerModel, TokenizedTweet, load_tagger, pos_tag, tokenize
from .pipeline import FeatureConfig, FeaturePipeline, FeatureVector, fit_pipeline
from .mlp import MlpConfig, MlpModel, forward, init_mlp, predict, train
from .ensemble import EnsembleModel, split_folds, train_ensemble, vote
from .metrics import EvalReport, evaluate
from .model_store import load_model, save_model

__all__ = [
    "EmbeddingTable",
    "EnsembleModel",
    "EvalReport",
    "FeatureConfig",
    "FeaturePipeline",
    "FeatureVector",
    "LabeledCorpus",
    "MlpConfig",
    "MlpModel",
    "NormalizedTweet",
    "PosTaggerModel",
    "RawTweet",
    "ResourceBundle",
    "TokenizedTweet",
    "evaluate",
    "fit_pipeline",
    "forward",
    "init_mlp",
    "load_dataset",
    "load_embedding_table",
    "load_emoji_map",
    "load_lexicon",
    "load_model",
    "load_normalization_dict",
    "load_resources",
    "load_tagger",
    "normalize_tweet",
    "pos_tag",
    "predict",
    "save_model",
    "split_folds",
    "tokenize",
    "train",
    "train_ensemble",
    "vote",
]
