"""Latent semantic indexing over the training tweets.

The term-document matrix holds tf-idf weighted word unigrams (document
frequency >= 2 by default) with L2-normalized document columns.  A rank-k
truncated SVD keeps U_k and the singular values; new tweets are folded in
as sigma^-1 U^T q where q is the tweet's tf-idf vector built with the
training idf.  The default solver is a seeded randomized range finder with
4 power iterations and a small dense SVD on the reduced matrix; `dense`
computes the full SVD directly (slow, used as the reference path).
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import ConfigError
from .ngrams import smoothed_idf
from .tokenization import TokenizedTweet

DEFAULT_RANK = 100
DEFAULT_MIN_DF = 2
_POWER_ITERATIONS = 4
_OVERSAMPLE = 10
_SIGMA_FLOOR = 1e-12


@dataclass(frozen=True)
class LsiModel:
    term_index: dict          # word -> matrix row
    idf: np.ndarray           # per term
    U: np.ndarray             # |terms| x k, orthonormal columns
    sigma: np.ndarray         # k singular values, descending
    k: int


def _fix_column_signs(U: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude entry positive (sign convention)."""
    U = U.copy()
    for j in range(U.shape[1]):
        idx = int(np.argmax(np.abs(U[:, j])))
        if U[idx, j] < 0:
            U[:, j] = -U[:, j]
    return U


def _randomized_svd(matrix, k: int, seed: int):
    m, n = matrix.shape
    rng = np.random.default_rng(seed)
    sketch = min(k + _OVERSAMPLE, min(m, n))
    omega = rng.standard_normal((n, sketch))
    Y = matrix @ omega
    Q, _ = np.linalg.qr(Y)
    for _ in range(_POWER_ITERATIONS):
        Z, _ = np.linalg.qr(matrix.T @ Q)
        Q, _ = np.linalg.qr(matrix @ Z)
    B = (matrix.T @ Q).T  # sparse.T @ dense stays a plain ndarray
    Ub, s, _ = np.linalg.svd(B, full_matrices=False)
    return Q @ Ub[:, :k], s[:k]


def _dense_svd(matrix, k: int):
    if scipy.sparse.issparse(matrix):
        matrix = matrix.toarray()
    U, s, _ = np.linalg.svd(matrix, full_matrices=False)
    return U[:, :k], s[:k]


def fit_lsi(
    corpus,
    k: int = DEFAULT_RANK,
    min_df: int = DEFAULT_MIN_DF,
    method: str = "randomized",
    seed: int = 0,
) -> LsiModel:
    """Fit the rank-k model on tokenized tweets."""
    if not corpus:
        raise ConfigError("cannot fit LSI on an empty corpus")
    df: Counter = Counter()
    for tweet in corpus:
        df.update(set(tweet.tokens))
    terms = sorted(w for w, n in df.items() if n >= min_df)
    n_docs = len(corpus)
    max_rank = min(len(terms), n_docs)
    if k <= 0 or k > max_rank:
        raise ConfigError(
            f"LSI rank {k} is not achievable; it must be in 1..{max_rank} "
            f"({len(terms)} terms with df>={min_df}, {n_docs} documents)"
        )
    term_index = {t: i for i, t in enumerate(terms)}
    idf = np.array([smoothed_idf(n_docs, df[t]) for t in terms], dtype=np.float64)

    rows, cols, vals = [], [], []
    for j, tweet in enumerate(corpus):
        counts = Counter(t for t in tweet.tokens if t in term_index)
        if not counts:
            continue
        col = np.array([(term_index[t], n) for t, n in sorted(counts.items())], dtype=np.float64)
        weights = col[:, 1] * idf[col[:, 0].astype(int)]
        weights = weights / np.linalg.norm(weights)
        rows.extend(int(i) for i in col[:, 0])
        cols.extend([j] * len(weights))
        vals.extend(weights)
    matrix = scipy.sparse.csr_matrix(
        (vals, (rows, cols)), shape=(len(terms), n_docs), dtype=np.float64
    )

    if method == "randomized":
        U, sigma = _randomized_svd(matrix, k, seed)
    elif method == "dense":
        U, sigma = _dense_svd(matrix, k)
    else:
        raise ConfigError(f"unknown LSI method {method!r}")
    return LsiModel(term_index=term_index, idf=idf, U=_fix_column_signs(U), sigma=sigma, k=k)


def term_vector(tokens, model: LsiModel) -> np.ndarray:
    """L2-normalized tf-idf vector of a token list in the model's term space."""
    q = np.zeros(len(model.term_index))
    for token, n in Counter(tokens).items():
        row = model.term_index.get(token)
        if row is not None:
            q[row] = n * model.idf[row]
    norm = np.linalg.norm(q)
    if norm > 0.0:
        q /= norm
    return q


def project(tweet: TokenizedTweet, model: LsiModel) -> np.ndarray:
    """Fold a tweet into the latent space: sigma^-1 U^T q (zero for OOV-only)."""
    q = term_vector(tweet.tokens, model)
    coords = model.U.T @ q
    safe = model.sigma > _SIGMA_FLOOR
    out = np.zeros(model.k)
    out[safe] = coords[safe] / model.sigma[safe]
    return out
