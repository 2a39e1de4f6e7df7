"""Tweet text normalization.

Fixed stage order:

1. emoji -> text name (longest codepoint sequence first)
2. @mention -> "<USER>"
3. URL -> "<URL>"
4. per-token normalization-dictionary lookup (case-insensitive)
5. elongation squeeze: runs of >= 3 identical letters drop to 2; if the
   squeezed token (or the squeeze-to-1 form) is a known word it is adopted
6. lowercase everything except the two sentinels

The result is whitespace-normalized (tokens joined by single spaces) and
the operation is idempotent and total on any unicode string.
"""

import re
from dataclasses import dataclass, field

from .corpus import RawTweet, ResourceBundle

USER_SENTINEL = "<USER>"
URL_SENTINEL = "<URL>"

_MENTION_RE = re.compile(r"@\w+")
_URL_RE = re.compile(r"(?:https?://\S*|\bwww\.\S+)")
_ELONGATION_RE = re.compile(r"([^\W\d_])\1{2,}", re.UNICODE)
_SENTINEL_SPLIT_RE = re.compile(r"(<USER>|<URL>)")


@dataclass(frozen=True)
class NormalizedTweet:
    id: int
    text: str
    applied: tuple = field(default_factory=tuple)


def _squeeze(token: str, keep: int) -> str:
    return _ELONGATION_RE.sub(lambda m: m.group(1) * keep, token)


def _normalize_token(token, dictionary, known_words, applied):
    if token in (USER_SENTINEL, URL_SENTINEL):
        return token
    if USER_SENTINEL in token or URL_SENTINEL in token:
        # composite like "<USER>," keeps the sentinel's casing intact
        return "".join(
            part if part in (USER_SENTINEL, URL_SENTINEL) else part.lower()
            for part in _SENTINEL_SPLIT_RE.split(token)
        )
    lowered = token.lower()
    if lowered in dictionary:
        applied.add("dict")
        return dictionary[lowered]
    if _ELONGATION_RE.search(lowered):
        two = _squeeze(lowered, 2)
        if two in dictionary:
            applied.add("elongation")
            return dictionary[two]
        one = _squeeze(lowered, 1)
        if one in dictionary:
            applied.add("elongation")
            return dictionary[one]
        if one in known_words:
            applied.add("elongation")
            return one
        applied.add("elongation")
        return two
    return lowered


def normalize_text(text: str, resources: ResourceBundle) -> tuple[str, tuple]:
    """Normalize a raw tweet string; returns (text, applied transformation tags)."""
    applied = set()

    for chars in sorted(resources.emoji_map, key=len, reverse=True):
        if chars in text:
            applied.add("emoji")
            text = text.replace(chars, f" {resources.emoji_map[chars]} ")

    if _MENTION_RE.search(text):
        applied.add("user")
        text = _MENTION_RE.sub(USER_SENTINEL, text)
    if _URL_RE.search(text):
        applied.add("url")
        text = _URL_RE.sub(URL_SENTINEL, text)

    dictionary = resources.normalization_dict
    known = resources.known_words()
    tokens = []
    for token in text.split():
        # the mention regex leaves "@", "@!" etc. untouched; the sentinel
        # contract bans any "@"-initial token, so sweep those up here
        if token.startswith("@"):
            applied.add("user")
            tokens.append(USER_SENTINEL)
            continue
        tokens.append(_normalize_token(token, dictionary, known, applied))
    return " ".join(tokens), tuple(sorted(applied))


def normalize_tweet(raw: RawTweet, resources: ResourceBundle) -> NormalizedTweet:
    text, applied = normalize_text(raw.text, resources)
    return NormalizedTweet(id=raw.id, text=text, applied=applied)
