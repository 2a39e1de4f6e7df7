"""Tweet-aware tokenization and averaged-perceptron POS tagging.

The tokenizer splits on whitespace, keeps "<USER>"/"<URL>" and "#hashtag"
pieces intact, peels punctuation characters into their own tokens and
splits contractions at the apostrophe ("don't" -> "do", "n't").

The tagger is a greedy averaged perceptron over a fixed 45-symbol tagset
(Penn Treebank word tags plus punctuation tags); its weights ship as a
plain-text data file and tagging is fully deterministic.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import shipped_data_path
from .errors import ParseError, ResourceError, ValidationError
from .normalize import NormalizedTweet, URL_SENTINEL, USER_SENTINEL

#: frozen 45-symbol tagset: 36 Penn Treebank word tags + 9 punctuation tags
TAGSET = (
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS",
    "MD", "NN", "NNP", "NNPS", "NNS", "PDT", "POS", "PRP", "PRP$", "RB",
    "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN",
    "VBP", "VBZ", "WDT", "WP", "WP$", "WRB",
    "#", "$", "''", "(", ")", ",", ".", ":", "``",
)
TAG_INDEX = {t: i for i, t in enumerate(TAGSET)}

DEFAULT_TAGGER_FILE = "pos_tagger_weights.txt"

_HASHTAG_RE = re.compile(r"#\w+")
_CONTRACTION_RE = re.compile(r"^(\w+)('s|'m|'re|'ve|'ll|'d)$", re.IGNORECASE)


@dataclass(frozen=True)
class TokenizedTweet:
    id: int
    tokens: tuple
    tags: tuple
    text: str = ""

    @property
    def char_count(self) -> int:
        return len(self.text)

    @property
    def word_count(self) -> int:
        return len(self.tokens)


def _split_contraction(word: str):
    if len(word) > 3 and word.lower().endswith("n't"):
        return [word[:-3], word[-3:]]
    match = _CONTRACTION_RE.match(word)
    if match:
        return [match.group(1), match.group(2)]
    return [word]


def _is_punct(ch: str) -> bool:
    return not (ch.isalnum() or ch == "_")


def _protected(piece: str) -> bool:
    return (
        piece.startswith(USER_SENTINEL)
        or piece.startswith(URL_SENTINEL)
        or _HASHTAG_RE.match(piece) is not None
    )


def tokenize(text: str) -> list[str]:
    """Split a normalized tweet string into tokens.

    Leading and trailing punctuation characters become their own tokens
    ("thanks!!" -> thanks ! !); internal punctuation stays put ("3.5").
    """
    tokens: list[str] = []
    for piece in text.split():
        while piece and _is_punct(piece[0]) and not _protected(piece):
            tokens.append(piece[0])
            piece = piece[1:]
        trailing: list[str] = []
        while (
            piece
            and _is_punct(piece[-1])
            and piece not in (USER_SENTINEL, URL_SENTINEL)
            and _HASHTAG_RE.fullmatch(piece) is None
        ):
            trailing.append(piece[-1])
            piece = piece[:-1]
        if piece in (USER_SENTINEL, URL_SENTINEL) or _HASHTAG_RE.fullmatch(piece):
            tokens.append(piece)
        elif piece:
            tokens.extend(_split_contraction(piece))
        tokens.extend(reversed(trailing))
    return tokens


def _word_shape(word: str) -> str:
    shape = []
    last = ""
    for ch in word:
        if ch.isdigit():
            code = "d"
        elif ch.isalpha():
            code = "X" if ch.isupper() else "x"
        else:
            code = ch
        if code != last:
            shape.append(code)
        last = code
    return "".join(shape)


def token_features(i: int, words: list[str], prev_tag: str, prev2_tag: str) -> list[str]:
    """Contextual feature strings for position `i` of the padded word list.

    `words` carries two leading and two trailing padding entries, so the
    token under decision sits at ``words[i + 2]``.
    """
    w = words[i + 2]
    feats = [
        "bias",
        f"w={w}",
        f"suf1={w[-1:]}",
        f"suf2={w[-2:]}",
        f"suf3={w[-3:]}",
        f"pre1={w[:1]}",
        f"pre2={w[:2]}",
        f"pre3={w[:3]}",
        f"shape={_word_shape(w)}",
        f"t-1={prev_tag}",
        f"t-2={prev2_tag}",
        f"t-1t-2={prev_tag}+{prev2_tag}",
        f"t-1w={prev_tag}+{w}",
        f"w-1={words[i + 1]}",
        f"w-2={words[i]}",
        f"w+1={words[i + 3]}",
        f"w+2={words[i + 4]}",
    ]
    return feats


@dataclass
class PosTaggerModel:
    """Feature -> per-tag weight rows, decoded greedily left to right."""

    weights: dict = field(default_factory=dict)  # feature string -> np.ndarray(45)
    tagset: tuple = TAGSET

    def tag(self, tokens) -> list[str]:
        if not tokens:
            return []
        words = ["-PAD2-", "-PAD1-"] + list(tokens) + ["-PAD1-", "-PAD2-"]
        prev_tag, prev2_tag = "-START-", "-START2-"
        tags = []
        for i in range(len(tokens)):
            scores = np.zeros(len(self.tagset))
            for feat in token_features(i, words, prev_tag, prev2_tag):
                row = self.weights.get(feat)
                if row is not None:
                    scores += row
            best = int(np.argmax(scores))  # ties: lowest tagset index
            tag = self.tagset[best]
            tags.append(tag)
            prev2_tag, prev_tag = prev_tag, tag
        return tags


def load_tagger(path=None) -> PosTaggerModel:
    """Load perceptron weights from the shipped (or a user-supplied) file.

    Format: comment lines start "#"; one ``feature<TAB>tag<TAB>weight``
    triple per line.
    """
    path = Path(path) if path is not None else shipped_data_path(DEFAULT_TAGGER_FILE)
    if not path.exists():
        raise ResourceError(f"POS tagger weights file not found: {path}")
    weights: dict = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ParseError(f"tagger weights line {lineno}: expected 3 columns")
            feat, tag, value = parts
            if tag not in TAG_INDEX:
                raise ValidationError(f"tagger weights line {lineno}: unknown tag {tag!r}")
            row = weights.get(feat)
            if row is None:
                row = weights[feat] = np.zeros(len(TAGSET))
            row[TAG_INDEX[tag]] = float(value)
    return PosTaggerModel(weights=weights)


def pos_tag(tokens, tagger: PosTaggerModel) -> list[str]:
    return tagger.tag(tokens)


def read_sidecar_tags(path, required_ids=None) -> dict:
    """Read externally produced tags: TSV of ``id<TAB>space-separated tags``.

    With `required_ids`, every id must be covered (strict mode).
    """
    path = Path(path)
    if not path.exists():
        raise ResourceError(f"POS sidecar file not found: {path}")
    table: dict = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"sidecar line {lineno}: expected 2 columns, got {len(parts)}")
            try:
                tweet_id = int(parts[0])
            except ValueError as exc:
                raise ParseError(f"sidecar line {lineno}: bad tweet id {parts[0]!r}") from exc
            tags = parts[1].split() if parts[1].strip() else []
            for tag in tags:
                if tag not in TAG_INDEX:
                    raise ValidationError(f"sidecar line {lineno}: unknown tag symbol {tag!r}")
            table[tweet_id] = tags
    if required_ids is not None:
        missing = sorted(set(required_ids) - set(table))
        if missing:
            raise ValidationError(f"sidecar misses tags for tweet ids: {missing}")
    return table


def process_tweet(
    normalized: NormalizedTweet, tagger: PosTaggerModel, tag_overrides=None
) -> TokenizedTweet:
    """Tokenize + tag one normalized tweet."""
    tokens = tokenize(normalized.text)
    if tag_overrides is not None and normalized.id in tag_overrides:
        tags = list(tag_overrides[normalized.id])
        if len(tags) != len(tokens):
            raise ValidationError(
                f"tweet {normalized.id}: sidecar has {len(tags)} tags for {len(tokens)} tokens"
            )
    else:
        tags = tagger.tag(tokens)
    return TokenizedTweet(
        id=normalized.id, tokens=tuple(tokens), tags=tuple(tags), text=normalized.text
    )
