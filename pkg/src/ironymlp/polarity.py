"""Polarity block: 12 sentiment-signal features.

Fixed column order: four signal counts (positive words, negative words,
positive emoji, negative emoji), their four presence flags, the negation
flag, then three derived features (positive minus negative word count,
polarity-contrast flag, total signal count).  Matching is token-level,
case-insensitive and exact; emoji signals match the text names introduced
by normalization.
"""

import numpy as np

from .corpus import ResourceBundle
from .tokenization import TokenizedTweet

POLARITY_DIM = 12

FEATURE_NAMES = (
    "pos_word_count",
    "neg_word_count",
    "pos_emoji_count",
    "neg_emoji_count",
    "has_pos_word",
    "has_neg_word",
    "has_pos_emoji",
    "has_neg_emoji",
    "has_negation",
    "pos_minus_neg_words",
    "polarity_contrast",
    "total_signals",
)


def polarity_block(tweet: TokenizedTweet, resources: ResourceBundle) -> np.ndarray:
    pos_words = neg_words = pos_emoji = neg_emoji = 0
    negation = False
    for token in tweet.tokens:
        token = token.lower()
        if token in resources.positive_lexicon:
            pos_words += 1
        if token in resources.negative_lexicon:
            neg_words += 1
        emoji_pol = resources.emoji_polarity.get(token)
        if emoji_pol == "pos":
            pos_emoji += 1
        elif emoji_pol == "neg":
            neg_emoji += 1
        if token in resources.negation_words:
            negation = True
    return np.array(
        [
            pos_words,
            neg_words,
            pos_emoji,
            neg_emoji,
            float(pos_words > 0),
            float(neg_words > 0),
            float(pos_emoji > 0),
            float(neg_emoji > 0),
            float(negation),
            pos_words - neg_words,
            float(pos_words > 0 and neg_words > 0),
            pos_words + neg_words + pos_emoji + neg_emoji,
        ],
        dtype=np.float64,
    )
