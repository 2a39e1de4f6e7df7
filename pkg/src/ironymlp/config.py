"""Run configuration: config-file parsing plus CLI-flag overrides.

Config files are INI-style key/value text with four sections::

    [run]       task, seed, jobs, folds
    [paths]     train, test, model, embeddings, positive_lexicon,
                negative_lexicon, normalization_dict, emoji_map,
                emoji_polarity, tagger_weights, pos_sidecar, brown_corpus
    [mlp]       hidden1, hidden2, learning_rate, l2, max_epochs,
                early_stop_patience, batch_size
    [features]  lexical, syntactic, semantic, polarity, word_top_k,
                char_top_k, lsi_k, lsi_min_df, lsi_method, brown_clusters
                (comma separated), brown_min_count, embedding_dim

Flags always override file values; unset MLP hidden sizes fall back to the
per-task defaults (800,400 for A and 800,300 for B).
"""

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import load_resources
from .errors import ConfigError
from .mlp import MlpConfig, config_for_task
from .pipeline import FeatureConfig
from .tokenization import load_tagger

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in _BOOL_TRUE:
        return True
    if lowered in _BOOL_FALSE:
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


@dataclass
class RunConfig:
    task: str = "A"
    seed: int = 42
    jobs: int = 1
    folds: int = 10
    paths: dict = field(default_factory=dict)
    hidden1: int | None = None
    hidden2: int | None = None
    learning_rate: float = 1e-4
    l2: float = 1e-5
    max_epochs: int = 100
    early_stop_patience: int = 30
    batch_size: int = 32
    lexical: bool = True
    syntactic: bool = True
    semantic: bool = True
    polarity: bool = True
    word_top_k: int = 1000
    char_top_k: int = 1000
    lsi_k: int = 100
    lsi_min_df: int = 2
    lsi_method: str = "randomized"
    brown_clusters: tuple = (80, 100, 120)
    brown_min_count: int = 1
    embedding_dim: int = 300

    def mlp_config(self) -> MlpConfig:
        config = config_for_task(
            self.task,
            learning_rate=self.learning_rate,
            l2=self.l2,
            max_epochs=self.max_epochs,
            early_stop_patience=self.early_stop_patience,
            batch_size=self.batch_size,
            seed=self.seed,
        )
        hidden = list(config.hidden_sizes)
        if self.hidden1 is not None:
            hidden[0] = self.hidden1
        if self.hidden2 is not None:
            hidden[1] = self.hidden2
        return MlpConfig(
            hidden_sizes=tuple(hidden),
            learning_rate=config.learning_rate,
            l2=config.l2,
            max_epochs=config.max_epochs,
            early_stop_patience=config.early_stop_patience,
            batch_size=config.batch_size,
            seed=config.seed,
        )

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(
            lexical=self.lexical,
            syntactic=self.syntactic,
            semantic=self.semantic,
            polarity=self.polarity,
            word_top_k=self.word_top_k,
            char_top_k=self.char_top_k,
            lsi_k=self.lsi_k,
            lsi_min_df=self.lsi_min_df,
            lsi_method=self.lsi_method,
            brown_counts=self.brown_clusters,
            brown_min_count=self.brown_min_count,
            embedding_dim=self.embedding_dim,
        )

    def load_resources(self):
        return load_resources(
            embeddings_path=self.paths.get("embeddings"),
            embedding_dim=self.embedding_dim,
            positive_lexicon_path=self.paths.get("positive_lexicon"),
            negative_lexicon_path=self.paths.get("negative_lexicon"),
            normalization_dict_path=self.paths.get("normalization_dict"),
            emoji_map_path=self.paths.get("emoji_map"),
            emoji_polarity_path=self.paths.get("emoji_polarity"),
        )

    def load_tagger(self):
        return load_tagger(self.paths.get("tagger_weights"))


_INT_KEYS = {
    "run": {"seed", "jobs", "folds"},
    "mlp": {"hidden1", "hidden2", "max_epochs", "early_stop_patience", "batch_size"},
    "features": {
        "word_top_k", "char_top_k", "lsi_k", "lsi_min_df", "brown_min_count", "embedding_dim",
    },
}
_FLOAT_KEYS = {"mlp": {"learning_rate", "l2"}}
_BOOL_KEYS = {"features": {"lexical", "syntactic", "semantic", "polarity"}}
_PATH_KEYS = {
    "train", "test", "model", "embeddings", "positive_lexicon", "negative_lexicon",
    "normalization_dict", "emoji_map", "emoji_polarity", "tagger_weights",
    "pos_sidecar", "brown_corpus",
}


def read_config_file(path) -> RunConfig:
    """Parse a config file into a RunConfig (defaults where keys are absent)."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from exc
    config = RunConfig()
    for section in parser.sections():
        if section not in ("run", "paths", "mlp", "features"):
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            _apply_value(config, section, key, raw)
    return config


def _apply_value(config: RunConfig, section: str, key: str, raw: str) -> None:
    raw = raw.strip()
    if section == "paths":
        if key not in _PATH_KEYS:
            raise ConfigError(f"unknown path key {key!r}")
        config.paths[key] = raw
        return
    if section == "run" and key == "task":
        if raw.upper() not in ("A", "B"):
            raise ConfigError(f"task must be A or B, got {raw!r}")
        config.task = raw.upper()
        return
    if section == "features" and key == "brown_clusters":
        try:
            config.brown_clusters = tuple(int(v) for v in raw.split(",") if v.strip())
        except ValueError as exc:
            raise ConfigError(f"brown_clusters: expected comma-separated integers, got {raw!r}") from exc
        return
    if section == "features" and key == "lsi_method":
        if raw not in ("randomized", "dense"):
            raise ConfigError(f"lsi_method must be 'randomized' or 'dense', got {raw!r}")
        config.lsi_method = raw
        return
    if key in _INT_KEYS.get(section, ()):
        try:
            setattr(config, key, int(raw))
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}: expected an integer, got {raw!r}") from exc
        return
    if key in _FLOAT_KEYS.get(section, ()):
        try:
            setattr(config, key, float(raw))
        except ValueError as exc:
            raise ConfigError(f"{section}.{key}: expected a number, got {raw!r}") from exc
        return
    if key in _BOOL_KEYS.get(section, ()):
        setattr(config, key, _parse_bool(raw, f"{section}.{key}"))
        return
    raise ConfigError(f"unknown config key {key!r} in section [{section}]")
