"""Arabizi (romanized Arabic) to Arabic script.

A character-level phrase table maps short roman sequences to Arabic
sequences with log-probability-like weights. Tokens are decoded by a
monotone left-to-right beam search that maximizes total weight.
"""

from __future__ import annotations

import logging
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .normalizer import normalize_chars

log = logging.getLogger(__name__)

ARABIZI_DIGITS = "2356789"
_ROMAN_RE = re.compile(r"^[A-Za-z0-9']+$")
# leading/trailing punctuation peeled off before candidate detection
_TOKEN_RE = re.compile(r"^([\"(\[]*)([A-Za-z0-9']+)([.,!?;:)\]\"؟،]*)$")
_SPLIT_RE = re.compile(r"(\s+)")


class PhraseTableError(ValueError):
    pass


class TransliterationError(ValueError):
    pass


@dataclass(frozen=True)
class DecoderParams:
    beam_width: int = 16
    max_phrase_len: int = 3

    def __post_init__(self) -> None:
        if self.beam_width < 1 or self.max_phrase_len < 1:
            raise ValueError("beam_width and max_phrase_len must be >= 1")


@dataclass(frozen=True)
class PhraseTable:
    entries: dict[str, tuple[tuple[str, float], ...]]
    max_phrase_len: int

    def __len__(self) -> int:
        return sum(len(v) for v in self.entries.values())

    @classmethod
    def from_triples(cls, triples) -> "PhraseTable":
        grouped: dict[str, list[tuple[str, float]]] = defaultdict(list)
        seen = set()
        for src, tgt, weight in triples:
            src = src.lower()
            if not src:
                raise PhraseTableError("empty source sequence")
            if not math.isfinite(weight):
                raise PhraseTableError(f"non-finite weight for {src!r}")
            if (src, tgt) in seen:
                raise PhraseTableError(f"duplicate pair {src!r} -> {tgt!r}")
            seen.add((src, tgt))
            grouped[src].append((tgt, float(weight)))
        entries = {
            src: tuple(sorted(opts, key=lambda o: (-o[1], o[0])))
            for src, opts in sorted(grouped.items())
        }
        max_len = max((len(s) for s in entries), default=0)
        return cls(entries, max_len)

    def missing_coverage(self) -> list[str]:
        """Single letters and arabizi digits that have no entry."""
        needed = [chr(c) for c in range(ord("a"), ord("z") + 1)] + list(ARABIZI_DIGITS)
        return [ch for ch in needed if ch not in self.entries]


def load_phrase_table(path: str | Path) -> PhraseTable:
    """Parse a ``source<TAB>target<TAB>weight`` file. ``#`` lines are comments."""
    triples = []
    seen: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise PhraseTableError(f"{path}:{lineno}: expected 3 tab-separated fields")
            src, tgt, w = parts
            if not src:
                raise PhraseTableError(f"{path}:{lineno}: empty source sequence")
            try:
                weight = float(w)
            except ValueError:
                raise PhraseTableError(f"{path}:{lineno}: non-numeric weight {w!r}") from None
            if not math.isfinite(weight):
                raise PhraseTableError(f"{path}:{lineno}: non-finite weight {w!r}")
            tgt = normalize_chars(tgt)
            key = (src.lower(), tgt)
            if key in seen:
                raise PhraseTableError(
                    f"{path}:{lineno}: duplicate pair {src!r} -> {tgt!r} (first on line {seen[key]})"
                )
            seen[key] = lineno
            triples.append((src, tgt, weight))
    return PhraseTable.from_triples(triples)


def load_exclusions(path: str | Path) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)


def default_phrase_table() -> PhraseTable:
    with resources.as_file(resources.files("arabsent.data") / "arabizi_table.tsv") as p:
        return load_phrase_table(p)


def default_exclusions() -> frozenset[str]:
    with resources.as_file(resources.files("arabsent.data") / "arabizi_exclusions.txt") as p:
        return load_exclusions(p)


def is_candidate(token: str, exclusion: frozenset[str] | set[str] = frozenset()) -> bool:
    if not _ROMAN_RE.match(token):
        return False
    if token.isdigit():
        return False
    return token.lower() not in exclusion


def transliterate_token(
    token: str, table: PhraseTable, params: DecoderParams = DecoderParams()
) -> str:
    """Best-weight monotone segmentation of ``token`` into table phrases.

    Hypotheses are grouped in stacks by the number of source characters
    covered; each stack keeps its ``beam_width`` best entries ranked by
    weight, then by target string. Ties on the final stack go to the
    lexicographically smallest target.
    """
    src = token.lower()
    n = len(src)
    max_len = min(params.max_phrase_len, table.max_phrase_len) or 1
    for pos, ch in enumerate(src):
        if ch not in table.entries:
            raise TransliterationError(f"no phrase covers {token[pos]!r} at position {pos} in {token!r}")

    stacks: list[dict[str, float]] = [dict() for _ in range(n + 1)]
    stacks[0][""] = 0.0
    for pos in range(n):
        stack = stacks[pos]
        if not stack:
            continue
        if len(stack) > params.beam_width:
            kept = sorted(stack.items(), key=lambda kv: (-kv[1], kv[0]))[: params.beam_width]
        else:
            kept = list(stack.items())
        for prefix, weight in kept:
            for length in range(1, min(max_len, n - pos) + 1):
                options = table.entries.get(src[pos:pos + length])
                if not options:
                    continue
                nxt = stacks[pos + length]
                for tgt, w in options:
                    cand = prefix + tgt
                    total = weight + w
                    # identical targets from different segmentations: keep the best weight
                    if cand not in nxt or total > nxt[cand]:
                        nxt[cand] = total
        stacks[pos] = {}
    final = stacks[n]
    if not final:
        raise TransliterationError(f"no segmentation covers {token!r}")
    best, _ = min(final.items(), key=lambda kv: (-kv[1], kv[0]))
    return best


def transliterate_text(
    text: str,
    table: PhraseTable,
    exclusion: frozenset[str] | set[str] = frozenset(),
    params: DecoderParams = DecoderParams(),
    strict: bool = False,
) -> str:
    """Replace arabizi tokens in ``text``; everything else is kept verbatim."""
    if not text:
        return text
    parts = _SPLIT_RE.split(text)
    changed = False
    for i in range(0, len(parts), 2):
        piece = parts[i]
        if not piece:
            continue
        m = _TOKEN_RE.match(piece)
        if not m or not is_candidate(m.group(2), exclusion):
            continue
        try:
            converted = transliterate_token(m.group(2), table, params)
        except TransliterationError:
            if strict:
                raise
            log.debug("leaving %r untransliterated", piece)
            continue
        parts[i] = m.group(1) + converted + m.group(3)
        changed = True
    return "".join(parts) if changed else text
