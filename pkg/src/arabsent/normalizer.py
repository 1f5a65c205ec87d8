"""Character- and word-level normalization of dialectal Arabic text.

Character level: Alef/Yeh/Heh unification, Urdu-style letters, diacritic and
Kasheeda stripping. Word level: collapsing emphatic letter repetition
("جمييييل") back to a known vocabulary form.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

ALEF = "ا"
ALEF_VARIANTS = ("أ", "إ", "آ", "ٱ")
ALEF_MAKSURA = "ى"
YEH = "ي"
TEH_MARBUTA = "ة"
HEH = "ه"
URDU_HEH = "ہ"
URDU_TEH_MARBUTA = "ۃ"
KASHEEDA = "ـ"
DIACRITICS = tuple(chr(c) for c in range(0x064B, 0x0660))

# beyond this many long runs per word the 2**k candidate search is skipped
_MAX_CANDIDATE_RUNS = 10

_WORD_RE = re.compile(r"\w+|[^\w\s]+")


@dataclass(frozen=True)
class NormalizationOptions:
    unify_alef: bool = True
    unify_yeh: bool = True
    unify_heh: bool = True
    map_urdu_chars: bool = True
    strip_diacritics: bool = True
    strip_kasheeda: bool = True
    collapse_elongation: bool = True
    min_run_for_collapse: int = 3

    def __post_init__(self) -> None:
        if self.min_run_for_collapse < 2:
            raise ValueError("min_run_for_collapse must be >= 2")


DEFAULT_OPTIONS = NormalizationOptions()


@dataclass(frozen=True)
class Vocabulary:
    """Set of known, character-normalized word forms."""

    forms: frozenset[str] = frozenset()

    def __contains__(self, word: object) -> bool:
        return word in self.forms

    def __len__(self) -> int:
        return len(self.forms)

    @classmethod
    def from_words(
        cls, words: Iterable[str], opts: NormalizationOptions = DEFAULT_OPTIONS
    ) -> "Vocabulary":
        forms: set[str] = set()
        for phrase in words:
            for word in normalize_chars(phrase, opts).split():
                forms.add(word)
        return cls(frozenset(forms))

    def union(self, other: "Vocabulary") -> "Vocabulary":
        return Vocabulary(self.forms | other.forms)


EMPTY_VOCABULARY = Vocabulary()


def load_wordlist(path: str | Path, opts: NormalizationOptions = DEFAULT_OPTIONS) -> Vocabulary:
    """Read a one-form-per-line wordlist; ``#`` starts a comment line."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.append(line)
    return Vocabulary.from_words(words, opts)


_table_cache: dict[NormalizationOptions, dict[int, str | None]] = {}


def _translation_table(opts: NormalizationOptions) -> dict[int, str | None]:
    table = _table_cache.get(opts)
    if table is not None:
        return table
    table = {}
    if opts.unify_alef:
        for ch in ALEF_VARIANTS:
            table[ord(ch)] = ALEF
    if opts.unify_yeh:
        table[ord(ALEF_MAKSURA)] = YEH
    if opts.unify_heh:
        table[ord(TEH_MARBUTA)] = HEH
    if opts.map_urdu_chars:
        table[ord(URDU_HEH)] = HEH
        table[ord(URDU_TEH_MARBUTA)] = HEH if opts.unify_heh else TEH_MARBUTA
    if opts.strip_diacritics:
        for ch in DIACRITICS:
            table[ord(ch)] = None
    if opts.strip_kasheeda:
        table[ord(KASHEEDA)] = None
    _table_cache[opts] = table
    return table


def normalize_chars(text: str, opts: NormalizationOptions = DEFAULT_OPTIONS) -> str:
    return text.translate(_translation_table(opts))


def _runs(word: str) -> list[tuple[str, int]]:
    return [(ch, len(list(group))) for ch, group in itertools.groupby(word)]


def collapse_candidates(word: str, min_run: int = 3) -> list[str]:
    """All collapses of ``word`` with each long run reduced to one or two chars.

    Ordered shortest first, then lexicographically. Two-char reductions are
    only produced when they would not themselves count as a long run.
    """
    runs = _runs(word)
    choices: list[tuple[str, ...]] = []
    for ch, n in runs:
        if n >= min_run:
            opts = (ch, ch * 2) if min_run > 2 else (ch,)
            choices.append(opts)
        else:
            choices.append((ch * n,))
    candidates = {"".join(parts) for parts in itertools.product(*choices)}
    return sorted(candidates, key=lambda c: (len(c), c))


def _fallback_collapse(word: str, min_run: int) -> str:
    return "".join(ch if n >= min_run else ch * n for ch, n in _runs(word))


def _collapse_word(word: str, vocab: Vocabulary, min_run: int) -> str:
    runs = _runs(word)
    long_runs = sum(1 for _, n in runs if n >= min_run)
    if not long_runs:
        return word
    if vocab.forms and long_runs <= _MAX_CANDIDATE_RUNS:
        for cand in collapse_candidates(word, min_run):
            if cand in vocab:
                return cand
    return _fallback_collapse(word, min_run)


def _has_long_run(text: str, min_run: int) -> bool:
    prev = ""
    count = 0
    for ch in text:
        if ch == prev:
            count += 1
            if count >= min_run and not ch.isspace():
                return True
        else:
            prev, count = ch, 1
    return False


def collapse_elongation(
    text: str,
    vocab: Vocabulary = EMPTY_VOCABULARY,
    opts: NormalizationOptions = DEFAULT_OPTIONS,
) -> str:
    """Collapse emphatic character runs, preferring forms found in ``vocab``.

    Words (``\\w+``) are matched against the vocabulary; punctuation and emoji
    runs fall straight through to the single-character collapse. Whitespace
    is never touched.
    """
    if not opts.collapse_elongation:
        return text
    min_run = opts.min_run_for_collapse
    if not _has_long_run(text, min_run):
        return text
    return _WORD_RE.sub(lambda m: _collapse_word(m.group(0), vocab, min_run), text)


def normalize(
    text: str,
    vocab: Vocabulary = EMPTY_VOCABULARY,
    opts: NormalizationOptions = DEFAULT_OPTIONS,
) -> str:
    return collapse_elongation(normalize_chars(text, opts), vocab, opts)
