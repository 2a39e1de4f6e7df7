"""Lexical and syntactic tf-idf blocks.

Word and character 1-3-grams are pooled per level and capped at the
`top_k` grams with the largest summed tf-idf over the training corpus
(ties broken lexicographically).  The smoothed idf is

    idf(g) = ln((1 + N) / (1 + df(g))) + 1

and every vectorized block is L2-normalized (a zero block stays zero).
The syntactic block keeps all 45 POS tags in frozen tagset order.
"""

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .tokenization import TAG_INDEX, TAGSET, TokenizedTweet

WORD_LEVEL = "word"
CHAR_LEVEL = "char"
NGRAM_ORDERS = (1, 2, 3)


@dataclass(frozen=True)
class NgramVocabulary:
    level: str
    grams: tuple            # column order
    idf: np.ndarray         # aligned with `grams`
    top_k: int
    n_range: tuple = NGRAM_ORDERS

    def __post_init__(self):
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.grams)})

    def __len__(self):
        return len(self.grams)

    def column(self, gram):
        return self._index.get(gram)


@dataclass(frozen=True)
class PosVocabulary:
    idf: np.ndarray          # aligned with TAGSET
    tagset: tuple = TAGSET

    def __len__(self):
        return len(self.tagset)


def smoothed_idf(n_docs: int, df: int) -> float:
    return math.log((1.0 + n_docs) / (1.0 + df)) + 1.0


def tweet_ngrams(tweet: TokenizedTweet, level: str, n_range=NGRAM_ORDERS) -> Counter:
    """Multiset of the tweet's n-grams at one level.

    Word grams are space-joined token windows; char grams are substrings of
    the normalized text, spaces included.
    """
    counts: Counter = Counter()
    if level == WORD_LEVEL:
        tokens = tweet.tokens
        for n in n_range:
            for i in range(len(tokens) - n + 1):
                counts[" ".join(tokens[i : i + n])] += 1
    elif level == CHAR_LEVEL:
        text = tweet.text
        for n in n_range:
            for i in range(len(text) - n + 1):
                counts[text[i : i + n]] += 1
    else:
        raise ConfigError(f"unknown n-gram level {level!r}")
    return counts


def fit_ngram_vocab(corpus, level: str, top_k: int, n_range=NGRAM_ORDERS) -> NgramVocabulary:
    """Fit one n-gram vocabulary: pooled 1-3-grams, top_k by summed tf-idf."""
    if top_k <= 0:
        raise ConfigError(f"top_k must be positive, got {top_k}")
    if not corpus:
        raise ConfigError("cannot fit an n-gram vocabulary on an empty corpus")
    total_tf: Counter = Counter()
    df: Counter = Counter()
    for tweet in corpus:
        counts = tweet_ngrams(tweet, level, n_range)
        total_tf.update(counts)
        df.update(counts.keys())
    n_docs = len(corpus)
    scored = [
        (-(total_tf[g] * smoothed_idf(n_docs, df[g])), g) for g in total_tf
    ]
    scored.sort()
    kept = [g for _, g in scored[:top_k]]
    idf = np.array([smoothed_idf(n_docs, df[g]) for g in kept], dtype=np.float64)
    return NgramVocabulary(level=level, grams=tuple(kept), idf=idf, top_k=top_k, n_range=tuple(n_range))


def _l2_normalize(vec: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vec)
    if norm > 0.0:
        vec = vec / norm
    return vec


def vectorize_ngrams(tweet: TokenizedTweet, vocab: NgramVocabulary) -> np.ndarray:
    """tf * idf over the fitted vocabulary, L2-normalized; OOV grams ignored."""
    vec = np.zeros(len(vocab))
    for gram, tf in tweet_ngrams(tweet, vocab.level, vocab.n_range).items():
        col = vocab.column(gram)
        if col is not None:
            vec[col] = tf * vocab.idf[col]
    return _l2_normalize(vec)


def surface_counts(tweet: TokenizedTweet) -> np.ndarray:
    return np.array([tweet.char_count, tweet.word_count], dtype=np.float64)


def fit_pos_vocab(corpus) -> PosVocabulary:
    """idf per POS tag over tweets-as-documents; unseen tags get the df=0 idf."""
    if not corpus:
        raise ConfigError("cannot fit a POS vocabulary on an empty corpus")
    df: Counter = Counter()
    for tweet in corpus:
        df.update(set(tweet.tags))
    n_docs = len(corpus)
    idf = np.array([smoothed_idf(n_docs, df[tag]) for tag in TAGSET], dtype=np.float64)
    return PosVocabulary(idf=idf)


def vectorize_pos(tweet: TokenizedTweet, vocab: PosVocabulary) -> np.ndarray:
    vec = np.zeros(len(vocab))
    for tag, tf in Counter(tweet.tags).items():
        col = TAG_INDEX[tag]
        vec[col] = tf * vocab.idf[col]
    return _l2_normalize(vec)
