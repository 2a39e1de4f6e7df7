"""Greedy agglomerative word clustering over adjacent-word statistics.

The objective is the average mutual information (AMI) between the cluster
of a word and the cluster of its right neighbor:

    AMI = sum over cluster pairs of p(c,c') * ln( p(c,c') / (p_l(c) p_r(c')) )

where p(c,c') is the fraction of bigram events crossing from c to c'.
Clustering is the classic greedy insertion scheme: the C most frequent
words start as singleton clusters; every further word (in frequency order)
is added as an extra cluster and the pair of clusters whose merge loses
the least AMI is merged.  Candidate losses within 1e-12 of the minimum
count as tied (mathematically equal merges differ only by rounding noise)
and ties break on the lowest (cluster-id, cluster-id) pair.  Cluster ids
are assigned in creation order (initial singletons get their frequency
rank, inserted words the next fresh id) and a merge keeps the smaller id.
Only the flat C-cluster partition is kept.

During insertion, AMI is evaluated over the bigram events among the words
inserted so far, normalized by the corpus-wide bigram total; the
normalizer is shared by all candidates of a step, so the greedy choice is
unaffected by the partial view.
"""

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .tokenization import TokenizedTweet

DEFAULT_CLUSTER_COUNTS = (80, 100, 120)


@dataclass(frozen=True)
class BigramStats:
    unigrams: dict                # word -> count (words below min_count dropped)
    bigrams: dict                 # (left, right) -> count, both words kept
    total_tokens: int             # sum of kept unigram counts
    total_bigrams: int

    def words_by_frequency(self) -> list[str]:
        return sorted(self.unigrams, key=lambda w: (-self.unigrams[w], w))


@dataclass(frozen=True)
class BrownClustering:
    C: int
    assignment: dict              # word -> cluster id in [0, n_clusters)
    vocab_order: tuple            # words by descending frequency
    ami: float
    merges: tuple = field(default_factory=tuple)  # (kept id, lost id, ami loss)

    @property
    def n_clusters(self) -> int:
        return min(self.C, len(self.vocab_order))


def collect_bigram_stats(corpus, min_count: int = 1) -> BigramStats:
    """Count unigrams and within-tweet adjacent bigrams.

    Words with frequency below `min_count` are dropped from the vocabulary
    and every bigram event touching them is discarded (no re-linking).
    """
    unigrams: Counter = Counter()
    for tweet in corpus:
        unigrams.update(tweet.tokens)
    kept = {w: n for w, n in unigrams.items() if n >= min_count}
    if not kept:
        raise ConfigError(
            f"no word reaches min_count={min_count}; the clustering vocabulary is empty"
        )
    bigrams: Counter = Counter()
    for tweet in corpus:
        toks = tweet.tokens
        for left, right in zip(toks, toks[1:]):
            if left in kept and right in kept:
                bigrams[(left, right)] += 1
    return BigramStats(
        unigrams=dict(kept),
        bigrams=dict(bigrams),
        total_tokens=sum(kept.values()),
        total_bigrams=sum(bigrams.values()),
    )


def average_mutual_information(assignment: dict, stats: BigramStats) -> float:
    """AMI of a full cluster assignment, straight from the definition."""
    total = stats.total_bigrams
    if total == 0:
        return 0.0
    joint: Counter = Counter()
    left: Counter = Counter()
    right: Counter = Counter()
    for (a, b), n in stats.bigrams.items():
        ca, cb = assignment[a], assignment[b]
        joint[(ca, cb)] += n
        left[ca] += n
        right[cb] += n
    ami = 0.0
    for (ca, cb), n in joint.items():
        ami += (n / total) * math.log(n * total / (left[ca] * right[cb]))
    return ami


def _q_terms(counts, denom, total):
    """Elementwise p*ln(p/(pl*pr)) contribution: (n/M)*ln(n*M/denom), 0 where n=0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (counts / total) * np.log(counts * total / denom)
    return np.where(counts > 0.0, vals, 0.0)


def _partition_information(joint: np.ndarray, total: int) -> float:
    if total == 0:
        return 0.0
    r = joint.sum(axis=1)
    c = joint.sum(axis=0)
    return float(_q_terms(joint, np.outer(r, c), total).sum())


def _safe_log(values):
    out = np.zeros(len(values))
    positive = values > 0
    out[positive] = np.log(values[positive])
    return out


def _candidate_losses(joint: np.ndarray, total: int, pair_i, pair_j, g_table: np.ndarray):
    """AMI loss of merging every cluster pair, vectorized over pairs.

    `joint` holds integer bigram counts, so every n*ln(n) term comes from
    the precomputed `g_table` instead of a per-pair log; expanding
    f(n, r, c) = (g(n) + n ln M - n ln r - n ln c) / M leaves per-cluster
    sums plus one integer gather over the merged rows/columns.
    """
    log_m = math.log(total)
    r = joint.sum(axis=1)
    c = joint.sum(axis=0)
    log_r = _safe_log(r)
    log_c = _safe_log(c)
    g_joint = g_table[joint]

    # per-cluster sums: u[a] = sum_b n_ab ln c_b, v[b] = sum_a n_ab ln r_a
    u = joint @ log_c
    v = joint.T @ log_r
    g_row = g_joint.sum(axis=1)
    g_col = g_joint.sum(axis=0)
    f_row = (g_row + r * log_m - r * log_r - u) / total
    f_col = (g_col + c * log_m - c * log_c - v) / total

    def f_entry(a, b):
        n = joint[a, b]
        return (g_table[n] + n * (log_m - log_r[a] - log_c[b])) / total

    t_old = (
        f_row[pair_i] + f_row[pair_j] + f_col[pair_i] + f_col[pair_j]
        - f_entry(pair_i, pair_i) - f_entry(pair_i, pair_j)
        - f_entry(pair_j, pair_i) - f_entry(pair_j, pair_j)
    )

    n_ii = joint[pair_i, pair_i]
    n_ij = joint[pair_i, pair_j]
    n_ji = joint[pair_j, pair_i]
    n_jj = joint[pair_j, pair_j]
    diag_m = n_ii + n_ij + n_ji + n_jj
    r_m = r[pair_i] + r[pair_j]
    c_m = c[pair_i] + c[pair_j]
    log_rm = _safe_log(r_m)
    log_cm = _safe_log(c_m)

    # merged row against all other clusters' columns
    g_row_pair = g_table[joint[pair_i, :] + joint[pair_j, :]].sum(axis=1)
    g_row_pair -= g_table[n_ii + n_ji] + g_table[n_ij + n_jj]
    row_mass = r_m - diag_m
    row_logc = u[pair_i] + u[pair_j] - (n_ii + n_ji) * log_c[pair_i] - (n_ij + n_jj) * log_c[pair_j]
    rowsum = (g_row_pair + row_mass * log_m - row_mass * log_rm - row_logc) / total

    # merged column against all other clusters' rows
    joint_t = np.ascontiguousarray(joint.T)
    g_col_pair = g_table[joint_t[pair_i, :] + joint_t[pair_j, :]].sum(axis=1)
    g_col_pair -= g_table[n_ii + n_ij] + g_table[n_ji + n_jj]
    col_mass = c_m - diag_m
    col_logr = v[pair_i] + v[pair_j] - (n_ii + n_ij) * log_r[pair_i] - (n_ji + n_jj) * log_r[pair_j]
    colsum = (g_col_pair + col_mass * log_m - col_mass * log_cm - col_logr) / total

    diag_term = (g_table[diag_m] + diag_m * (log_m - log_rm - log_cm)) / total
    return t_old - (rowsum + colsum + diag_term)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent[x] = x

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, keep, lose):
        self.parent[self.find(lose)] = self.find(keep)


def train_brown(stats: BigramStats, C: int) -> BrownClustering:
    """Run the greedy clustering down to min(C, |vocab|) flat clusters."""
    if C <= 0:
        raise ConfigError(f"cluster count must be positive, got {C}")
    words = stats.words_by_frequency()
    total = stats.total_bigrams

    if len(words) <= C:
        assignment = {w: i for i, w in enumerate(words)}
        return BrownClustering(
            C=C,
            assignment=assignment,
            vocab_order=tuple(words),
            ami=average_mutual_information(assignment, stats) if words else 0.0,
        )

    right_of: dict = {}
    left_of: dict = {}
    for (a, b), n in stats.bigrams.items():
        right_of.setdefault(a, Counter())[b] += n
        left_of.setdefault(b, Counter())[a] += n

    counts = np.arange(total + 1, dtype=np.float64)
    g_table = np.zeros(total + 1)
    if total > 0:
        g_table[1:] = counts[1:] * np.log(counts[1:])

    joint = np.zeros((0, 0), dtype=np.int64)
    slot_ids: list[int] = []           # slot -> cluster id
    members: dict = {}                 # cluster id -> list of words
    uf = _UnionFind()
    word_id: dict = {}                 # word -> id at insertion time
    inserted: dict = {}                # word -> True once inserted
    merges: list = []
    pair_cache: dict = {}

    def id_slot():
        return {cid: s for s, cid in enumerate(slot_ids)}

    def insert(word, cid):
        nonlocal joint
        a = joint.shape[0]
        grown = np.zeros((a + 1, a + 1), dtype=np.int64)
        grown[:a, :a] = joint
        lookup = id_slot()
        for nb, n in right_of.get(word, {}).items():
            if nb in inserted:
                grown[a, lookup[uf.find(word_id[nb])]] += n
        for nb, n in left_of.get(word, {}).items():
            if nb in inserted:
                grown[lookup[uf.find(word_id[nb])], a] += n
        if (word, word) in stats.bigrams:
            grown[a, a] += stats.bigrams[(word, word)]
        joint = grown
        slot_ids.append(cid)
        members[cid] = [word]
        uf.add(cid)
        word_id[word] = cid
        inserted[word] = True

    def merge_best():
        nonlocal joint
        a = joint.shape[0]
        if a not in pair_cache:
            pair_cache[a] = np.triu_indices(a, k=1)
        pair_i, pair_j = pair_cache[a]
        if total > 0:
            losses = _candidate_losses(joint, total, pair_i, pair_j, g_table)
        else:
            losses = np.zeros(len(pair_i))
        ids = np.array(slot_ids)
        lo = np.minimum(ids[pair_i], ids[pair_j])
        hi = np.maximum(ids[pair_i], ids[pair_j])
        # losses within 1e-12 of the minimum count as tied (mathematically
        # equal candidates differ by float noise); ties break on lowest ids
        tied = losses <= losses.min() + 1e-12
        best = np.lexsort((hi[tied], lo[tied]))[0]
        best = np.flatnonzero(tied)[best]
        si, sj = int(pair_i[best]), int(pair_j[best])
        keep_id, lose_id = int(lo[best]), int(hi[best])

        joint[si, :] += joint[sj, :]
        joint[:, si] += joint[:, sj]
        joint = np.delete(np.delete(joint, sj, axis=0), sj, axis=1)
        slot_ids[si] = keep_id
        del slot_ids[sj]
        members[keep_id].extend(members.pop(lose_id))
        uf.union(keep_id, lose_id)
        merges.append((keep_id, lose_id, float(losses[best])))

    for rank, word in enumerate(words[:C]):
        insert(word, rank)
    next_id = C
    for word in words[C:]:
        insert(word, next_id)
        next_id += 1
        merge_best()

    # canonical cluster indices: active clusters ordered by id
    order = sorted(slot_ids)
    canonical = {cid: k for k, cid in enumerate(order)}
    assignment = {}
    for cid in order:
        for word in members[cid]:
            assignment[word] = canonical[cid]
    return BrownClustering(
        C=C,
        assignment=assignment,
        vocab_order=tuple(words),
        ami=_partition_information(joint.astype(np.float64), total),
        merges=tuple(merges),
    )


def cluster_count_block(tweet: TokenizedTweet, clusterings) -> np.ndarray:
    """Per-clustering vectors of token counts per cluster, concatenated.

    Width is the sum of the requested cluster counts (sub-block width C even
    when fewer clusters were realizable); unassigned words contribute
    nothing, duplicate tokens count every occurrence.
    """
    blocks = []
    for clustering in clusterings:
        vec = np.zeros(clustering.C)
        for token in tweet.tokens:
            cluster = clustering.assignment.get(token)
            if cluster is not None:
                vec[cluster] += 1.0
        blocks.append(vec)
    return np.concatenate(blocks) if blocks else np.zeros(0)


def write_clusters_tsv(clustering: BrownClustering, stats: BigramStats, path) -> None:
    """Dump ``word<TAB>cluster-id<TAB>frequency`` rows for inspection."""
    with open(path, "w", encoding="utf-8") as handle:
        for word in clustering.vocab_order:
            handle.write(f"{word}\t{clustering.assignment[word]}\t{stats.unigrams[word]}\n")
