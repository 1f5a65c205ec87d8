"""Offset-preserving tokenizer for normalized text."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from functools import lru_cache

WORD = "word"
PUNCT = "punct"
EMOJI = "emoji"
NUMBER = "number"

SENTENCE_ENDERS = frozenset(".!?؟")
QUESTION_MARKS = frozenset("?؟")


@dataclass(frozen=True, slots=True)
class Token:
    text: str
    start: int
    end: int
    kind: str


@lru_cache(maxsize=4096)
def _char_class(ch: str) -> str:
    cat = unicodedata.category(ch)
    if cat[0] == "P":
        return PUNCT
    if cat in ("So", "Sk", "Cs") or 0x1F000 <= ord(ch) <= 0x1FAFF:
        return EMOJI
    return WORD


def _word_kind(text: str) -> str:
    return NUMBER if text.isdigit() else WORD


def tokenize(text: str) -> list[Token]:
    """Split on whitespace; punctuation and emoji become single-char tokens.

    Variation selectors and joiners stay attached to the preceding emoji.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        cls = _char_class(ch)
        if cls == PUNCT:
            tokens.append(Token(ch, i, i + 1, PUNCT))
            i += 1
            continue
        if cls == EMOJI:
            j = i + 1
            while j < n and text[j] in "\ufe0f\u200d":
                j += 1
            tokens.append(Token(text[i:j], i, j, EMOJI))
            i = j
            continue
        j = i + 1
        while j < n and not text[j].isspace() and _char_class(text[j]) == WORD:
            j += 1
        piece = text[i:j]
        tokens.append(Token(piece, i, j, _word_kind(piece)))
        i = j
    return tokens


def sentence_bounds(text: str, tokens: list[Token]) -> list[tuple[int, int]]:
    """Half-open token-index ranges partitioning ``tokens`` into sentences.

    A sentence ends after ``. ! ? ؟`` tokens and wherever a newline
    separates two tokens.
    """
    bounds: list[tuple[int, int]] = []
    start = 0
    for idx, tok in enumerate(tokens):
        end_here = tok.kind == PUNCT and tok.text in SENTENCE_ENDERS
        if not end_here and idx + 1 < len(tokens):
            end_here = "\n" in text[tok.end:tokens[idx + 1].start]
        if end_here:
            bounds.append((start, idx + 1))
            start = idx + 1
    if start < len(tokens):
        bounds.append((start, len(tokens)))
    return bounds


def token_texts(text: str) -> tuple[str, ...]:
    return tuple(t.text for t in tokenize(text))
