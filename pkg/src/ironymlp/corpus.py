"""Dataset and resource-file ingestion.

Datasets are tab-separated ``index<TAB>label<TAB>text`` files (the
SemEval-2018 Task 3 distribution format); an optional header line starting
with "Tweet index" is skipped.  Resource files are plain text: embeddings
one token + D reals per line, lexicons one word per line with ";" comments,
normalization dictionary / emoji map / emoji polarity as two-column TSV.

All loaders are pure functions of file content and return immutable values.
"""

from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path

import numpy as np

from .errors import ParseError, ResourceError, ValidationError

TASK_A = "A"
TASK_B = "B"

#: class id -> name, per subtask
LABEL_NAMES = {
    TASK_A: ("non-ironic", "ironic"),
    TASK_B: ("non-irony", "polarity-contrast verbal", "other verbal", "situational"),
}

#: shipped fallback negation words ("not", "n't", ... closed class)
NEGATION_WORDS = frozenset(
    ["not", "n't", "no", "never", "neither", "nor", "nobody", "nothing", "nowhere", "cannot"]
)

_HEADER_PREFIX = "tweet index"


def n_classes(task: str) -> int:
    return len(LABEL_NAMES[task])


@dataclass(frozen=True)
class RawTweet:
    id: int
    text: str
    label: int | None = None


@dataclass(frozen=True)
class LabeledCorpus:
    tweets: tuple[RawTweet, ...]
    task: str
    provenance: str = ""

    def __len__(self):
        return len(self.tweets)

    def labels(self) -> list[int]:
        return [t.label for t in self.tweets]

    def class_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for t in self.tweets:
            if t.label is not None:
                counts[t.label] = counts.get(t.label, 0) + 1
        return counts


@dataclass(frozen=True)
class EmbeddingTable:
    """Token -> real vector; every vector has length `dim`."""

    dim: int
    vectors: dict = field(default_factory=dict)

    def __contains__(self, token):
        return token in self.vectors

    def __getitem__(self, token):
        return self.vectors[token]

    def __len__(self):
        return len(self.vectors)


@dataclass(frozen=True)
class ResourceBundle:
    embeddings: EmbeddingTable
    positive_lexicon: frozenset
    negative_lexicon: frozenset
    normalization_dict: dict
    emoji_map: dict
    emoji_polarity: dict
    negation_words: frozenset = NEGATION_WORDS

    def known_words(self) -> frozenset:
        """Vocabulary used to accept an elongation squeeze as a real word.

        Union of the normalization dictionary (variants plus the words of
        the canonical forms), both sentiment lexicons and the negation list.
        Computed once and cached on the bundle.
        """
        cached = self.__dict__.get("_known_words")
        if cached is None:
            words = set(self.normalization_dict)
            for canonical in self.normalization_dict.values():
                words.update(canonical.split())
            cached = frozenset(
                words | self.positive_lexicon | self.negative_lexicon | self.negation_words
            )
            object.__setattr__(self, "_known_words", cached)
        return cached


def _validate_label(raw: str, task, lineno: int) -> int:
    try:
        label = int(raw)
    except ValueError as exc:
        raise ParseError(f"line {lineno}: label {raw!r} is not an integer") from exc
    if task is not None and label not in range(n_classes(task)):
        raise ValidationError(
            f"line {lineno}: label {label} out of range for task {task} "
            f"(expected 0..{n_classes(task) - 1})"
        )
    return label


def load_dataset(path, task) -> LabeledCorpus:
    """Load a tweet dataset for subtask `task` ("A" or "B").

    Rows are ``index<TAB>label<TAB>text`` (labeled) or ``index<TAB>text``
    (unlabeled prediction input); the column count of the first data row is
    enforced on every row.  Order is preserved: the i-th data row becomes
    the i-th tweet.  ``task=None`` skips label-range validation (used by
    commands that only rewrite text).
    """
    if task is not None and task not in (TASK_A, TASK_B):
        raise ValidationError(f"unknown task {task!r} (expected 'A' or 'B')")
    path = Path(path)
    if not path.exists():
        raise ResourceError(f"dataset file not found: {path}")
    tweets = []
    ncols = None
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            if lineno == 1 and line.lower().startswith(_HEADER_PREFIX):
                continue
            parts = line.split("\t")
            if ncols is None:
                if len(parts) not in (2, 3):
                    raise ParseError(
                        f"line {lineno}: expected 2 or 3 tab-separated columns, got {len(parts)}"
                    )
                ncols = len(parts)
            if len(parts) != ncols:
                raise ParseError(
                    f"line {lineno}: expected {ncols} tab-separated columns, got {len(parts)}"
                )
            try:
                index = int(parts[0])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: tweet index {parts[0]!r} is not an integer") from exc
            if ncols == 3:
                label = _validate_label(parts[1], task, lineno)
                text = parts[2]
            else:
                label, text = None, parts[1]
            tweets.append(RawTweet(id=index, text=text, label=label))
    if not tweets:
        raise ParseError(f"{path}: no data rows")
    seen = set()
    for t in tweets:
        if t.id in seen:
            raise ValidationError(f"duplicate tweet index {t.id} in {path}")
        seen.add(t.id)
    return LabeledCorpus(tweets=tuple(tweets), task=task, provenance=str(path))


def load_embedding_table(path, expected_dim: int) -> EmbeddingTable:
    """Load a word-embedding text file (token + `expected_dim` reals per line).

    Duplicate tokens keep the first occurrence.
    """
    path = Path(path)
    if not path.exists():
        raise ResourceError(f"embedding file not found: {path}")
    vectors: dict = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) == 1 and not parts[0]:
                continue
            token, values = parts[0], parts[1:]
            if len(values) != expected_dim:
                raise ParseError(
                    f"line {lineno}: expected {expected_dim} values, got {len(values)}"
                )
            try:
                vec = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"line {lineno}: unparsable real value") from exc
            if token not in vectors:
                vectors[token] = vec
    return EmbeddingTable(dim=expected_dim, vectors=vectors)


def load_lexicon(path) -> frozenset:
    """One word per line, ";"-comment lines skipped, case-folded and trimmed."""
    path = Path(path)
    if not path.exists():
        raise ResourceError(f"lexicon file not found: {path}")
    words = set()
    with open(path, encoding="utf-8", errors="replace") as handle:
        for line in handle:
            word = line.strip()
            if not word or word.startswith(";"):
                continue
            words.add(word.lower())
    return frozenset(words)


def _load_two_column_tsv(path, what: str) -> dict:
    path = Path(path)
    if not path.exists():
        raise ResourceError(f"{what} file not found: {path}")
    table: dict = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"{what} line {lineno}: expected 2 columns, got {len(parts)}")
            key, value = parts[0].strip(), parts[1].strip()
            table[key.lower()] = value.lower()
    return table


def load_normalization_dict(path) -> dict:
    """Variant -> canonical form, case-folded both sides."""
    return _load_two_column_tsv(path, "normalization dictionary")


def load_emoji_map(path) -> dict:
    """Codepoint sequence (e.g. "U+1F602" or "U+2764 U+FE0F") -> text name.

    Returned keys are the actual character sequences, ready for substring
    replacement.
    """
    raw = _load_two_column_tsv(path, "emoji map")
    table = {}
    for codes, name in raw.items():
        chars = "".join(chr(int(c.strip()[2:], 16)) for c in codes.upper().split(" ") if c.strip())
        table[chars] = name
    return table


def load_emoji_polarity(path) -> dict:
    """Emoji text name -> "pos" or "neg"."""
    table = _load_two_column_tsv(path, "emoji polarity table")
    for name, pol in table.items():
        if pol not in ("pos", "neg"):
            raise ValidationError(f"emoji polarity for {name!r} must be 'pos' or 'neg', got {pol!r}")
    return table


def shipped_data_path(filename: str) -> Path:
    """Path of a data file bundled with the package."""
    ref = importlib_resources.files("ironymlp").joinpath("data", filename)
    return Path(str(ref))


def load_resources(
    embeddings_path=None,
    embedding_dim: int = 300,
    positive_lexicon_path=None,
    negative_lexicon_path=None,
    normalization_dict_path=None,
    emoji_map_path=None,
    emoji_polarity_path=None,
) -> ResourceBundle:
    """Assemble a ResourceBundle, falling back to the shipped data files.

    Without an embeddings path the table is empty (the averaged-embedding
    block is then all zeros); point it at a 300-dim GloVe file for real use.
    """
    if embeddings_path is None:
        embeddings = EmbeddingTable(dim=embedding_dim, vectors={})
    else:
        embeddings = load_embedding_table(embeddings_path, embedding_dim)
    return ResourceBundle(
        embeddings=embeddings,
        positive_lexicon=load_lexicon(positive_lexicon_path or shipped_data_path("positive_words.txt")),
        negative_lexicon=load_lexicon(negative_lexicon_path or shipped_data_path("negative_words.txt")),
        normalization_dict=load_normalization_dict(
            normalization_dict_path or shipped_data_path("normalization_dict.tsv")
        ),
        emoji_map=load_emoji_map(emoji_map_path or shipped_data_path("emoji_map.tsv")),
        emoji_polarity=load_emoji_polarity(
            emoji_polarity_path or shipped_data_path("emoji_polarity.tsv")
        ),
    )
