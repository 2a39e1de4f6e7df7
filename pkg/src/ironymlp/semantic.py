"""Semantic block: averaged word embedding + LSI projection + cluster counts."""

import numpy as np

from .brown import cluster_count_block
from .corpus import EmbeddingTable
from .errors import ConsistencyError
from .lsi import LsiModel, project
from .tokenization import TokenizedTweet

EMBEDDING_DIM = 300


def average_embedding(tweet: TokenizedTweet, table: EmbeddingTable) -> np.ndarray:
    """Mean of the embeddings of in-table tokens; zero vector if none match."""
    found = [table[t] for t in tweet.tokens if t in table]
    if not found:
        return np.zeros(table.dim)
    return np.mean(found, axis=0)


def semantic_block(
    tweet: TokenizedTweet, table: EmbeddingTable, lsi: LsiModel, clusterings
) -> np.ndarray:
    """[embedding_avg | lsi | cluster_counts], in that fixed order."""
    parts = (
        average_embedding(tweet, table),
        project(tweet, lsi),
        cluster_count_block(tweet, clusterings),
    )
    expected = (table.dim, lsi.k, sum(c.C for c in clusterings))
    for part, width in zip(parts, expected):
        if part.shape != (width,):
            raise ConsistencyError(
                f"semantic component width {part.shape} does not match layout width {width}"
            )
    return np.concatenate(parts)
